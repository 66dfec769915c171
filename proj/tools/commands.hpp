#pragma once

#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace bptn::cli {

/// Typed options that can also be supplied through a JSON config file. Keys are the long
/// option names without dashes; a flag given on the command line wins over the file.
class Params {
 public:
  explicit Params(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& target, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + name, target, help)->capture_default_str();
    bind(name, opt, target);
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& target, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + name, target, help);
    bind(name, opt, target);
    return opt;
  }

  /// Fills every option not given on the command line from `config`; unknown keys are errors.
  void merge(const nlohmann::json& config) const;
  /// All option values after merging.
  nlohmann::json resolved() const;

 private:
  struct Binding {
    std::string name;
    CLI::Option* option;
    std::function<void(const nlohmann::json&)> load;
    std::function<nlohmann::json()> dump;
  };

  template <class T>
  void bind(const std::string& name, CLI::Option* opt, T& target) {
    bindings_.push_back({name, opt, [&target](const nlohmann::json& j) { target = j.get<T>(); },
                         [&target] { return nlohmann::json(target); }});
  }

  CLI::App* app_;
  std::vector<Binding> bindings_;
};

/// Options shared by every subcommand.
struct Common {
  std::string config;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string out_dir = ".";
};

/// Registers every subcommand on `app`. The returned callbacks run after a successful parse.
void register_commands(CLI::App& app);

}  // namespace bptn::cli
