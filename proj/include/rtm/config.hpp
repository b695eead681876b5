#ifndef RTM_CONFIG_HPP
#define RTM_CONFIG_HPP

// Run configuration: a sectioned key=value text file with strict key
// validation (typos abort naming the offending key) and per-key provenance
// (default | preset | file | flag) printed with every command.

#include <map>
#include <stdexcept>
#include <string>

#include "rtm/forward.hpp"
#include "rtm/imaging.hpp"

namespace rtm {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class RunConfig {
  public:
    RunConfig();  // desk-scale defaults

    void apply_preset(const std::string& name);        // desk-scale | paper-scale
    void load_file(const std::string& path);           // [section] key = value
    void set(const std::string& section_key, const std::string& value,
             const std::string& provenance);

    std::string get(const std::string& section_key) const;
    double get_num(const std::string& section_key) const;
    int get_int(const std::string& section_key) const;

    std::string resolved_listing() const;

    SurfaceProfile make_profile() const;
    SurfaceKind surface_kind() const;
    Regime regime() const;
    ForwardConfig make_forward() const;
    ImageGrid make_grid() const;
    IndicatorConfig make_indicator() const;

    // consistency between a data header and this configuration
    void check_data_header(const ScatterData& d) const;

  private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> provenance_;
};

}  // namespace rtm

#endif
