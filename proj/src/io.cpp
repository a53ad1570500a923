#include "revhenon/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace revhenon {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json orbit_to_json(const Orbit& orbit) {
    nlohmann::json j;
    j["period"] = orbit.period;
    nlohmann::json pts = nlohmann::json::array();
    for (const Point2& p : orbit.points) pts.push_back({p.x, p.y});
    j["points"] = pts;
    j["residual"] = orbit.residual;
    j["trace"] = orbit.trace;
    j["det"] = orbit.det;
    j["cycle_jacobian"] = orbit.cycle_det;
    j["stability"] = stability_name(orbit.stability);
    j["symmetry"] = symmetry_name(orbit.symmetry);
    if (orbit.symmetry == SymmetryClass::CoupleMember) j["partner"] = orbit.partner;
    return j;
}

Orbit orbit_from_json(const nlohmann::json& j) {
    Orbit o;
    o.period = j.at("period").get<int>();
    for (const auto& p : j.at("points")) o.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    if (o.period != static_cast<int>(o.points.size()))
        throw std::invalid_argument("orbit json: period does not match point count");
    return o;
}

std::vector<Point2> load_seed_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open seed file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::invalid_argument("seed file is empty: " + path);

    std::vector<Point2> pts;
    if (text[first] == '{' || text[first] == '[') {
        const nlohmann::json j = nlohmann::json::parse(text);
        const nlohmann::json& arr = j.is_array() ? j : j.at("points");
        for (const auto& p : arr) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        return pts;
    }
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        double x, y;
        char sep;
        std::istringstream ls(line);
        if (ls >> x >> sep >> y)
            pts.push_back({x, y});
        else
            throw std::invalid_argument("seed file: cannot parse line '" + line + "'");
    }
    return pts;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string{};
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

std::string JobConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

double JobConfig::get_double(const std::string& key, double fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': not a number: " + it->second);
    }
}

int JobConfig::get_int(const std::string& key, int fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t used = 0;
        const int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': not an integer: " + it->second);
    }
}

std::vector<BivariateTerm> parse_bivariate_terms(const std::string& text) {
    std::vector<BivariateTerm> terms;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        int i, j;
        double a;
        char c1, c2;
        std::istringstream ts(item);
        if (!(ts >> i >> c1 >> j >> c2 >> a) || c1 != ',' || c2 != ',')
            throw std::invalid_argument("eps term '" + item + "': expected i,j,coeff");
        if (i < 0 || j < 0) throw std::invalid_argument("eps term '" + item + "': negative power");
        terms.push_back({i, j, a});
    }
    return terms;
}

std::vector<double> parse_coeff_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw std::invalid_argument("coefficient list: not a number: " + item);
        }
    }
    return out;
}

namespace {

Nonlinearity nonlinearity_from(const JobConfig& c, Nonlinearity::Kind fallback) {
    const std::string spec = c.get("F");
    const double M = c.get_double("M", 0.0);
    if (spec.empty() || spec == "quadratic-minus") {
        if (fallback == Nonlinearity::Kind::QuadraticPlus && spec.empty())
            return Nonlinearity::quadratic_plus(M);
        return Nonlinearity::quadratic_minus(M);
    }
    if (spec == "quadratic-plus") return Nonlinearity::quadratic_plus(M);
    if (spec.rfind("poly:", 0) == 0)
        return Nonlinearity::polynomial(parse_coeff_list(spec.substr(5)));
    throw std::invalid_argument("config key 'F': unknown form: " + spec);
}

PerturbationSpec eps_from(const JobConfig& c, const char* biv_key, const char* p_key,
                          const char* q_key) {
    const bool have_biv = c.has(biv_key);
    const bool have_sep = c.has(p_key) || c.has(q_key);
    if (have_biv && have_sep)
        throw std::invalid_argument(std::string("config: '") + biv_key +
                                    "' and separable coefficients are mutually exclusive");
    if (have_biv) {
        auto terms = parse_bivariate_terms(c.get(biv_key));
        if (terms.empty()) return PerturbationSpec::zero();
        return PerturbationSpec::bivariate(std::move(terms));
    }
    if (have_sep) {
        Polynomial p(c.has(p_key) ? parse_coeff_list(c.get(p_key)) : std::vector<double>{});
        Polynomial q(c.has(q_key) ? parse_coeff_list(c.get(q_key)) : std::vector<double>{});
        return PerturbationSpec::separable(std::move(p), std::move(q));
    }
    return PerturbationSpec::zero();
}

}  // namespace

MapInstance JobConfig::make_map() const {
    const std::string name = get("family");
    if (name.empty()) throw std::invalid_argument("config key 'family' is required");
    const auto fam = family_from_name(name);
    if (!fam) throw std::invalid_argument("config key 'family': unknown family: " + name);

    const double M = get_double("M", 0.0);
    const double b = get_double("b", 0.0);
    const double mu = get_double("mu", 0.0);
    const PerturbationSpec e1 = eps_from(*this, "eps", "eps_p", "eps_q");
    const PerturbationSpec e2 = eps_from(*this, "eps2", "eps2_p", "eps2_q");

    switch (*fam) {
        case Family::ConservativeH:
            return MapInstance::conservative_h(nonlinearity_from(*this, Nonlinearity::Kind::QuadraticMinus));
        case Family::CrossFormTildeH:
            return MapInstance::cross_form_tilde_h(
                nonlinearity_from(*this, Nonlinearity::Kind::QuadraticMinus), e1);
        case Family::TildeHm2:
            return MapInstance::tilde_h_m2(
                nonlinearity_from(*this, Nonlinearity::Kind::QuadraticMinus), e1);
        case Family::TildeH12inv:
            if (!has("b")) throw std::invalid_argument("config key 'b' is required for tilde-h12-inv");
            return MapInstance::tilde_h12_inv(
                nonlinearity_from(*this, Nonlinearity::Kind::QuadraticMinus), b, e1);
        case Family::QRhatH:
            return MapInstance::qr_hat_h(
                nonlinearity_from(*this, Nonlinearity::Kind::QuadraticMinus), e1, e2);
        case Family::QRexample1:
            return MapInstance::qr_example1(
                nonlinearity_from(*this, Nonlinearity::Kind::QuadraticMinus), e1);
        case Family::QRexample2:
            return MapInstance::qr_example2(
                nonlinearity_from(*this, Nonlinearity::Kind::QuadraticMinus), e2);
        case Family::NonorientableHatHm1:
            return MapInstance::nonorientable_hat_h_m1(
                nonlinearity_from(*this, Nonlinearity::Kind::QuadraticPlus), e1);
        case Family::T2mu:
            if (!has("b")) throw std::invalid_argument("config key 'b' is required for t2mu");
            return MapInstance::t2mu(M, b, mu);
        case Family::Hm1mu:
            return MapInstance::hm1mu(M, mu);
        case Family::Hp1mu:
            return MapInstance::hp1mu(M, mu);
    }
    throw std::invalid_argument("unreachable family");
}

}  // namespace revhenon
