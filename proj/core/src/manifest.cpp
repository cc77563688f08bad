#include "reviewforge/manifest.hpp"

#include <stdexcept>

#include "json.hpp"
#include "reviewforge/hash.hpp"
#include "reviewforge/io.hpp"

namespace reviewforge {

namespace {

using OrderedJson = nlohmann::ordered_json;

OrderedJson artifact_to_json(const RunManifest::Artifact& a) {
  return OrderedJson{{"name", a.name}, {"path", a.path}, {"hash", a.hash}};
}

RunManifest::Artifact artifact_from_json(const OrderedJson& j) {
  RunManifest::Artifact a;
  a.name = j.at("name").get<std::string>();
  a.path = j.at("path").get<std::string>();
  a.hash = j.at("hash").get<std::string>();
  return a;
}

}  // namespace

void RunManifest::record_input(const std::string& name, const std::filesystem::path& path) {
  inputs.push_back({name, path.string(), hex64(hash_file(path))});
}

void RunManifest::record_output(const std::string& name, const std::filesystem::path& path) {
  outputs.push_back({name, path.string(), ""});
}

void RunManifest::finalize_outputs() {
  for (auto& artifact : outputs) artifact.hash = hex64(hash_file(artifact.path));
}

std::string RunManifest::to_json() const {
  OrderedJson j;
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  j["argv"] = argv;
  j["flags"] = flags;
  j["seed"] = seed;
  j["inputs"] = OrderedJson::array();
  for (const auto& a : inputs) j["inputs"].push_back(artifact_to_json(a));
  j["outputs"] = OrderedJson::array();
  for (const auto& a : outputs) j["outputs"].push_back(artifact_to_json(a));
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  RunManifest m;
  try {
    OrderedJson j = OrderedJson::parse(text);
    m.tool_version = j.at("tool_version").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.flags = j.at("flags").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& a : j.at("inputs")) m.inputs.push_back(artifact_from_json(a));
    for (const auto& a : j.at("outputs")) m.outputs.push_back(artifact_from_json(a));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad manifest: ") + e.what());
  }
  return m;
}

void RunManifest::save(const std::filesystem::path& path) const { write_file(path, to_json()); }

RunManifest RunManifest::load(const std::filesystem::path& path) {
  return from_json(read_file(path));
}

}  // namespace reviewforge
