#ifndef REVHENON_IO_HPP
#define REVHENON_IO_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "revhenon/orbits.hpp"

namespace revhenon {

/// All numbers in emitted files go through this: 17 significant digits, so
/// identical inputs give byte-identical output.
std::string format_g17(double v);

nlohmann::json orbit_to_json(const Orbit& orbit);
Orbit orbit_from_json(const nlohmann::json& j);

/// Seed points from a file: either an orbit JSON report or CSV lines "x,y".
std::vector<Point2> load_seed_points(const std::string& path);

/// Flat key = value file; '#' starts a comment. Later keys win.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Everything a job needs to build its map and run. Flags overwrite config
/// file entries before `make_map` is called.
struct JobConfig {
    std::map<std::string, std::string> kv;

    void set(const std::string& key, const std::string& value) { kv[key] = value; }
    bool has(const std::string& key) const { return kv.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;

    /// Builds the MapInstance; throws std::invalid_argument naming the bad key.
    MapInstance make_map() const;
};

/// "i,j,a;i,j,a;..." -> bivariate terms
std::vector<BivariateTerm> parse_bivariate_terms(const std::string& text);
/// "c0,c1,c2,..." -> polynomial coefficients
std::vector<double> parse_coeff_list(const std::string& text);

}  // namespace revhenon

#endif
