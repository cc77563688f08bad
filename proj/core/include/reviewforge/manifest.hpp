#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace reviewforge {

// Record of one tool invocation: the resolved configuration plus content
// hashes of every input and output artifact. Written to disk before any
// output artifact exists (with output hashes pending), then rewritten once
// the outputs are final. Two runs with identical manifests must produce
// byte-identical outputs, so the manifest holds no timestamps or host state.
struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  std::vector<std::string> argv;              // full replay command line
  std::map<std::string, std::string> flags;   // resolved flag -> value
  std::uint64_t seed = 0;

  struct Artifact {
    std::string name;
    std::string path;
    std::string hash;  // hex fnv1a of file bytes; empty until hashed
  };
  std::vector<Artifact> inputs;
  std::vector<Artifact> outputs;

  // Hashes the file now; inputs exist before the run starts.
  void record_input(const std::string& name, const std::filesystem::path& path);
  // Registers the path only; hash is filled in by finalize_outputs().
  void record_output(const std::string& name, const std::filesystem::path& path);
  // Hashes every recorded output. Call after all outputs are written.
  void finalize_outputs();

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static RunManifest load(const std::filesystem::path& path);
};

}  // namespace reviewforge
