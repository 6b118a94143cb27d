#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dagas/growth/analysis.hpp"
#include "dagas/oracle/identity.hpp"
#include "dagas/systems/checks.hpp"
#include "dagas/systems/newton.hpp"

using namespace dagas;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Mode { exact, gaussian, floating };

struct Common {
    std::string out;
    std::string mode;
    bool csv = false;
    int threads = 1;
};

struct Params {
    std::string p, q;
    int sign = 1;
    double tol = 1e-10;
};

// "a/b", integers and plain decimals, read exactly.
Rational parse_exact(const std::string& s) {
    if (s.find_first_of("eE") != std::string::npos) throw UsageError("exponent notation is not exact: " + s);
    auto dot = s.find('.');
    if (dot == std::string::npos) return parse_rational(s);
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole = whole.substr(1);
    if (whole.empty()) whole = "0";
    if (frac.empty() || !std::all_of(frac.begin(), frac.end(), [](char c) { return std::isdigit(c); }))
        throw UsageError("malformed decimal: " + s);
    Rational r = parse_rational(whole + frac + "/1" + std::string(frac.size(), '0'));
    return neg ? Rational(-r) : r;
}

template <class S>
S parse_scalar(const std::string& s) {
    if constexpr (std::is_same_v<S, ComplexFloat>) {
        if (s.find('/') != std::string::npos) return ComplexFloat(parse_rational(s).get_d(), 0);
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw UsageError("malformed number: " + s);
        }
        if (used != s.size()) throw UsageError("malformed number: " + s);
        return ComplexFloat(v, 0);
    } else {
        return S(parse_exact(s));
    }
}

// Defaults p = 0.2, q = 0.3, written in the same form as a given p so an exact p keeps exact mode.
void default_params(Params& p) {
    if (p.p.empty()) p.p = "0.2";
    if (p.q.empty()) p.q = p.p.find_first_of(".eE") == std::string::npos ? "3/10" : "0.3";
}

Mode resolve_mode(const std::string& flag, const std::vector<std::string>& values) {
    if (flag == "exact" || flag == "rational") return Mode::exact;
    if (flag == "gaussian") return Mode::gaussian;
    if (flag == "float" || flag == "complex") return Mode::floating;
    if (!flag.empty()) throw UsageError("unknown mode: " + flag);
    for (auto& v : values)
        if (v.find_first_of(".eE") != std::string::npos) return Mode::floating;
    return Mode::exact;
}

std::string scalar_text(const Rational& r) { return to_string(r); }
std::string scalar_text(const Gaussian& g) {
    if (g.im == 0) return to_string(g.re);
    return to_string(g.re) + (g.im < 0 ? "-" : "+") + to_string(g.im < 0 ? Rational(-g.im) : g.im) + "*i";
}
std::string scalar_text(const ComplexFloat& c) {
    std::ostringstream os;
    os.precision(17);
    os << c.real();
    if (c.imag() != 0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "*i";
    return os.str();
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw UsageError("cannot write " + c.out);
    f << text;
}

void emit(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

template <class S>
json params_json(const std::vector<S>& ps) {
    json a = json::array();
    for (auto& p : ps) a.push_back(to_json_value(p));
    return a;
}

template <class S>
std::vector<S> gas_params(GasKind gas, const Params& p) {
    if (p.p.empty()) throw UsageError("--p is required");
    std::vector<S> v{parse_scalar<S>(p.p)};
    if (gas_param_count(gas) == 2) {
        if (p.q.empty()) throw UsageError("--q is required for gas " + gas_name(gas));
        v.push_back(parse_scalar<S>(p.q));
    }
    return v;
}

template <class S>
bool within(double residual, double tol) {
    return is_exact_v<S> ? residual == 0 : residual <= tol;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Catalog ids: lower case, "-6" and "-size6" both accepted.
std::string catalog_id(std::string s) {
    s = lower(s);
    if (s.size() > 2 && s.compare(s.size() - 2, 2, "-6") == 0) s = s.substr(0, s.size() - 2) + "-size6";
    return s;
}

const std::vector<std::string>& factor_ids() {
    static const std::vector<std::string> ids{"factor-x-reduced", "factor-x-c1", "factor-x-size6", "factor-y-d1",
                                              "factor-y-corner", "factor-y-size6", "factor-b", "factor-bicolour"};
    return ids;
}

bool is_factor_id(const std::string& id) {
    return std::find(factor_ids().begin(), factor_ids().end(), id) != factor_ids().end();
}

GasKind factor_id_gas(const std::string& id) {
    if (id.rfind("factor-x", 0) == 0) return GasKind::X;
    if (id.rfind("factor-y", 0) == 0) return GasKind::Y;
    if (id == "factor-b") return GasKind::B;
    if (id == "factor-bicolour") return GasKind::bicolour;
    throw UsageError("unknown factor catalog id: " + id);
}

template <class S>
FactorSolution<S> factor_by_id(const std::string& id, const Params& p) {
    auto ps = gas_params<S>(factor_id_gas(id), p);
    if (id == "factor-x-reduced") return catalog::factor_X_reduced<S>(ps[0], p.sign);
    if (id == "factor-x-c1") return catalog::factor_X_c1<S>(ps[0], p.sign);
    if (id == "factor-x-size6") return catalog::factor_X_size6<S>(ps[0], p.sign);
    if (id == "factor-y-d1") return catalog::factor_Y_d1<S>(ps[0], ps[1], p.sign);
    if (id == "factor-y-corner") return catalog::factor_Y_corner<S>(ps[0], ps[1], p.sign);
    if (id == "factor-y-size6") return catalog::factor_Y_size6<S>(ps[0], ps[1], p.sign);
    if (id == "factor-b") return catalog::factor_B<S>(ps[0], ps[1]);
    if (id == "factor-bicolour") return catalog::factor_bicolour<S>(ps[0], ps[1]);
    throw UsageError("unknown factor catalog id: " + id);
}

// Factor-based commands need radicals: exact runs use Gaussian rationals.
template <template <class> class F, class... A>
int with_factor_scalar(Mode m, A&&... args) {
    if (m == Mode::floating) return F<ComplexFloat>::run(std::forward<A>(args)...);
    return F<Gaussian>::run(std::forward<A>(args)...);
}

template <template <class> class F, class... A>
int with_plain_scalar(Mode m, A&&... args) {
    switch (m) {
        case Mode::exact: return F<Rational>::run(std::forward<A>(args)...);
        case Mode::gaussian: return F<Gaussian>::run(std::forward<A>(args)...);
        case Mode::floating: break;
    }
    return F<ComplexFloat>::run(std::forward<A>(args)...);
}

// ---- enumerate

struct EnumerateArgs {
    std::string lattice = "sq", width = "1", weight = "perimeter", rule = "reach";
    std::vector<long> sources{0}, sources2;
    int max_area = 10;
    bool oversource = false;
};

AnimalLattice parse_lattice(const std::string& lattice, const std::string& width) {
    if (lower(lattice) != "sq") throw UsageError("only the square lattice (sq) is enumerated");
    if (width == "plane") return AnimalLattice::plane();
    try {
        std::size_t used = 0;
        int n = std::stoi(width, &used);
        if (used != width.size()) throw UsageError("bad width");
        return AnimalLattice::cylinder(n);
    } catch (const std::logic_error&) {
        throw UsageError("--width must be a positive integer or 'plane'");
    }
}

std::vector<Cell> row_cells(const std::vector<long>& cols) {
    std::vector<Cell> v;
    for (auto c : cols) v.push_back({0, c});
    return v;
}

int run_enumerate(const EnumerateArgs& a, const Common& c) {
    auto lat = parse_lattice(a.lattice, a.width);
    if (a.max_area < 0) throw UsageError("--max-area must be >= 0");
    GFPoly gf;
    json j{{"command", "enumerate"}, {"lattice", lat.name()}, {"sources", a.sources}, {"weight", a.weight},
           {"max_area", a.max_area}};
    if (a.weight == "bicolour" || a.weight == "bicolor") {
        auto rule = a.rule == "literal" ? ColourRule::literal : ColourRule::reach;
        if (a.rule != "literal" && a.rule != "reach") throw UsageError("--rule must be reach or literal");
        gf = enumerate_bicoloured(lat, row_cells(a.sources), row_cells(a.sources2), a.max_area, rule);
        j["sources2"] = a.sources2;
        j["rule"] = a.rule;
    } else if (a.weight == "perimeter" || a.weight == "bonds") {
        SourceSpec src{lat, row_cells(a.sources), true};
        if (a.oversource) {
            if (a.weight != "perimeter") throw UsageError("--oversource counts perimeter only");
            auto r = oversource_gf(src, a.max_area);
            gf = r.gf;
            j["oversource"] = true;
            j["methods_agree"] = r.methods_agree;
        } else {
            gf = enumerate_da(src, a.max_area, a.weight == "bonds" ? AnimalWeight::bonds : AnimalWeight::perimeter);
        }
    } else {
        throw UsageError("--weight must be perimeter, bonds or bicolour");
    }
    if (c.csv) {
        std::string s = "area,count\n";
        auto counts = gf.area_counts();
        for (std::size_t k = 0; k < counts.size(); ++k) s += std::to_string(k) + "," + std::to_string(counts[k]) + "\n";
        emit(c, s);
    } else {
        j["gf"] = gf.to_json();
        j["polynomial"] = gf.to_string();
        emit(c, j);
    }
    return j.value("methods_agree", true) ? 0 : 1;
}

// ---- transfer / invariant

struct GasArgs {
    std::string gas = "x";
    int width = 1;
    bool zigzag = false, triangular = false;
    Params params;
};

template <class S>
struct TransferCmd {
    static int run(const GasArgs& a, const Common& c) {
        auto gas = parse_gas(a.gas);
        auto ps = gas_params<S>(gas, a.params);
        auto local = local_transition<S>(gas, ps, a.triangular ? 3 : 2);
        Matrix<S> T = a.zigzag || a.triangular ? zigzag_transfer(local, a.width) : transfer_matrix(local, a.width);
        double stoch = 0;
        for (std::size_t i = 0; i < T.rows(); ++i) {
            S s{};
            for (std::size_t k = 0; k < T.cols(); ++k) s += T(i, k);
            stoch = std::max(stoch, magnitude(S(s - S(1))));
        }
        json j{{"command", "transfer"}, {"gas", gas_name(gas)}, {"width", a.width}, {"mode", scalar_traits<S>::mode},
               {"params", params_json(ps)}, {"zigzag", a.zigzag || a.triangular}, {"triangular", a.triangular},
               {"row_sum_defect", stoch}, {"matrix", to_json_value(T)}};
        emit(c, j);
        return within<S>(stoch, a.params.tol) ? 0 : 1;
    }
};

template <class S>
struct InvariantCmd {
    static int run(const GasArgs& a, const Common& c) {
        auto gas = parse_gas(a.gas);
        auto ps = gas_params<S>(gas, a.params);
        auto local = local_transition<S>(gas, ps);
        auto inv = invariant_measure(local, a.width);
        auto T = transfer_matrix(local, a.width);
        Matrix<S> row = inv.as_row();
        double residual = max_abs_diff(Matrix<S>(row * T), row);
        if (c.csv) {
            std::string s = "config,weight\n";
            for (std::uint64_t k = 0; k < inv.weights.size(); ++k)
                s += config_string(decode(k, a.width, inv.s)) + "," + scalar_text(inv.weights[k]) + "\n";
            emit(c, s);
        } else {
            json measure = json::array();
            for (std::uint64_t k = 0; k < inv.weights.size(); ++k)
                measure.push_back(json{{"config", config_string(decode(k, a.width, inv.s))},
                                       {"weight", to_json_value(inv.weights[k])}});
            json j{{"command", "invariant"}, {"gas", gas_name(gas)}, {"width", a.width},
                   {"mode", scalar_traits<S>::mode}, {"params", params_json(ps)},
                   {"marginal_one", to_json_value(marginal(inv, {{0, 1}}))},
                   {"stationarity_residual", residual}, {"reflection_defect", reflection_defect(inv)},
                   {"measure", measure}};
            if (inv.s == 3) j["marginal_two"] = to_json_value(marginal(inv, {{0, 2}}));
            emit(c, j);
        }
        return within<S>(residual, a.params.tol) ? 0 : 1;
    }
};

// ---- identity

struct IdentityArgs {
    std::string which = "fo-x";
    int width = 1, max_area = 10;
    std::vector<long> sources{0}, sources2;
    Params params;
};

int run_identity(const IdentityArgs& a, const Common& c) {
    auto kind = parse_identity(a.which);
    if (a.params.p.empty()) throw UsageError("--p is required");
    std::vector<Rational> ps{parse_exact(a.params.p)};
    if (kind != IdentityKind::fo_x) {
        if (a.params.q.empty()) throw UsageError("--q is required for identity " + a.which);
        ps.push_back(parse_exact(a.params.q));
    }
    auto rep = identity_check(kind, a.width, ps, a.sources, a.max_area, a.sources2);
    json j = rep.to_json();
    j["command"] = "identity";
    j["params"] = params_json(ps);
    j["sources"] = a.sources;
    if (kind == IdentityKind::bicolour) j["sources2"] = a.sources2;
    emit(c, j);
    return rep.pass ? 0 : 1;
}

// ---- verify

struct VerifyArgs {
    std::string system, solution = "catalog";
    int n = 2;
    Params params;
};

template <class S>
json residual_json(const PolySystem<S>& sys, const std::map<std::string, S>& assignment, double tol, bool& pass) {
    auto r = sys.residual(assignment);
    pass = is_exact_v<S> ? r.exact_zero() : r.max_abs <= tol;
    return json{{"system", system_kind_name(sys.kind)}, {"variables", sys.names.size()},
                {"equations", sys.equations.size()}, {"residual_max", r.max_abs}, {"exact_zero", r.exact_zero()}};
}

template <class S>
int verify_solution(const FactorSolution<S>& f, const VerifyArgs& a, json& j) {
    bool pass = false;
    j["residual"] = residual_json(f.system(), f.assignment(), a.params.tol, pass);
    j["solution"] = f.to_json();
    j["defect"] = f.defect();
    pass = pass && within<S>(f.defect(), a.params.tol);
    j["pass"] = pass;
    return pass ? 0 : 1;
}

template <class S>
int verify_solution(const ZigzagSolution<S>& z, const VerifyArgs& a, json& j) {
    bool pass = false;
    j["residual"] = residual_json(z.system(), z.assignment(), a.params.tol, pass);
    j["solution"] = z.to_json();
    auto rep = zigzag_check(z, local_transition<S>(z.gas, z.params, z.triangular ? 3 : 2), a.n, 1e-9);
    j["measure"] = rep.to_json();
    pass = pass && rep.pass();
    j["pass"] = pass;
    return pass ? 0 : 1;
}

template <class S>
int verify_solution(const SplitSolution<S>& s, const VerifyArgs& a, json& j) {
    bool pass = false;
    SystemOptions opt;
    opt.size = static_cast<int>(s.V.front().rows());
    opt.gas = s.gas;
    j["residual"] = residual_json(build_system<S>(SystemKind::finite_split, s.params, opt), split_assignment(s),
                                  a.params.tol, pass);
    j["solution"] = split_to_json(s);
    auto rep = split_measure_check(s, a.n, 1e-9);
    j["measure"] = rep.to_json();
    pass = pass && rep.matches_invariant;
    j["pass"] = pass;
    return pass ? 0 : 1;
}

template <class S>
struct VerifyCatalogCmd {
    static int run(const std::string& id, const VerifyArgs& a, const Common& c) {
        json j{{"command", "verify"}, {"catalog", id}, {"mode", scalar_traits<S>::mode}, {"n", a.n}};
        int code = 0;
        if (is_factor_id(id)) {
            code = verify_solution(factor_by_id<S>(id, a.params), a, j);
        } else if (id == "tri-x") {
            code = verify_solution(catalog::triangular_X<S>(gas_params<S>(GasKind::X, a.params)[0], a.params.sign), a, j);
        } else if (id == "split-x") {
            code = verify_solution(catalog::split_X<S>(gas_params<S>(GasKind::X, a.params)[0]), a, j);
        } else {
            throw UsageError("unknown catalog system: " + id);
        }
        emit(c, j);
        return code;
    }
};

template <class S>
int verify_file(const json& sol, const VerifyArgs& a, const Common& c) {
    json j{{"command", "verify"}, {"file", a.solution}, {"mode", scalar_traits<S>::mode}, {"n", a.n}};
    const std::string type = sol.at("type").get<std::string>();
    int code = 0;
    auto check_kind = [&](SystemKind k) {
        if (!a.system.empty() && parse_system_kind(a.system) != k)
            throw UsageError("solution file holds a " + system_kind_name(k) + " solution, not " + a.system);
    };
    if (type == "factor") {
        auto f = FactorSolution<S>::from_json(sol);
        check_kind(f.kind());
        code = verify_solution(f, a, j);
    } else if (type == "zigzag") {
        auto z = ZigzagSolution<S>::from_json(sol);
        check_kind(z.kind());
        code = verify_solution(z, a, j);
    } else if (type == "split") {
        auto s = split_from_json<S>(sol);
        check_kind(SystemKind::finite_split);
        code = verify_solution(s, a, j);
    } else {
        throw UsageError("unknown solution type: " + type);
    }
    emit(c, j);
    return code;
}

int run_verify(VerifyArgs a, const Common& c) {
    if (a.solution == "catalog") {
        if (a.system.empty()) throw UsageError("--system is required with --solution catalog");
        default_params(a.params);
        Mode m = resolve_mode(c.mode, {a.params.p, a.params.q});
        if (m == Mode::floating) return VerifyCatalogCmd<ComplexFloat>::run(catalog_id(a.system), a, c);
        return VerifyCatalogCmd<Gaussian>::run(catalog_id(a.system), a, c);
    }
    std::ifstream f(a.solution);
    if (!f) throw UsageError("cannot read " + a.solution);
    json sol;
    try {
        sol = json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed solution file: ") + e.what());
    }
    // rational files load into Gaussian entries
    if (sol.value("mode", "") == "complex") return verify_file<ComplexFloat>(sol, a, c);
    return verify_file<Gaussian>(sol, a, c);
}

// ---- solve

struct SolveArgs {
    std::string system = "factor-x", gas = "x";
    int size = 2;
    bool trace_one = false, cnt = false, c1_one = false, d1_one = false, corner = false, printed = false;
    NewtonOptions newton;
    Params params;
};

int run_solve(const SolveArgs& a, const Common& c) {
    auto kind = parse_system_kind(a.system);
    SystemOptions opt;
    opt.size = a.size;
    opt.gas = is_factor_kind(kind) ? factor_gas(kind) : parse_gas(a.gas);
    opt.trace_one = a.trace_one;
    opt.cnt = a.cnt;
    opt.c1_one = a.c1_one;
    opt.d1_one = a.d1_one;
    opt.corner_y = a.corner;
    opt.printed_y = a.printed;
    auto ps = gas_params<ComplexFloat>(opt.gas, a.params);
    auto sys = build_system<ComplexFloat>(kind, ps, opt);
    auto res = newton_search(sys, a.newton);
    json j{{"command", "solve"}, {"system", system_kind_name(kind)}, {"gas", gas_name(opt.gas)}, {"size", a.size},
           {"params", params_json(ps)}, {"variables", sys.names.size()}, {"equations", sys.equations.size()},
           {"seed", a.newton.seed}, {"result", res.to_json()}};
    emit(c, j);
    return 0;
}

// ---- growth commands

struct GrowthArgs {
    std::string factor = "factor-y-d1", gas;
    int kappa = 2, n_max = 4, n = 4, size = 36;
    std::size_t cap = default_growth_cap;
    std::vector<std::size_t> entry;
    Params params;
};

template <class S>
FactorSolution<S> growth_factor(const GrowthArgs& a, json& j) {
    auto id = catalog_id(a.factor);
    if (!is_factor_id(id)) throw UsageError("--factor must be one of the factor catalog ids");
    if (!a.gas.empty() && parse_gas(a.gas) != factor_id_gas(id))
        throw UsageError("--gas " + a.gas + " does not match factor " + id);
    auto f = factor_by_id<S>(id, a.params);
    j["factor"] = id;
    j["gas"] = gas_name(f.gas);
    j["mode"] = scalar_traits<S>::mode;
    j["params"] = params_json(f.params);
    return f;
}

template <class S>
struct GrowCmd {
    static int run(const GrowthArgs& a, const Common& c) {
        json j{{"command", "grow"}, {"kappa", a.kappa}};
        auto f = growth_factor<S>(a, j);
        if (!a.entry.empty()) {
            if (a.entry.size() != 2) throw UsageError("--entry takes I,J");
            LazyGrowth<S> lazy(f);
            json e;
            for (char w : {'V', 'H', 'Q'})
                for (int x = 0; x < 2; ++x) {
                    auto shape = lazy.shape(w, a.kappa);
                    std::string key = std::string(1, w) + std::to_string(x);
                    e[key] = a.entry[0] < shape.first && a.entry[1] < shape.second
                                 ? to_json_value(lazy.entry(w, a.kappa, x, a.entry[0], a.entry[1]))
                                 : json(nullptr);
                }
            j["entry"] = {{"i", a.entry[0]}, {"j", a.entry[1]}, {"values", e}};
            emit(c, j);
            return 0;
        }
        auto g = grow(f, a.kappa, default_init<S>(), a.cap);
        json traces = json::array(), corners = json::array();
        for (int k = 0; k <= a.kappa; ++k) {
            const auto& l = g.level(k);
            traces.push_back(to_json_value(trace(l.Qstar())));
            corners.push_back(json::array({to_json_value(l.Q[0](0, 0)), to_json_value(l.Q[1](0, 0))}));
        }
        auto st = matrix_power_stabilize(g.last().Qstar(), std::max(2, 2 * a.kappa + 1), a.params.tol);
        json defects = json::array();
        bool pass = true;
        for (int n = 1; n <= a.n_max; ++n) {
            double d = growth_measure_defect(g, n);
            pass = pass && (is_exact_v<S> ? d == 0 : d <= 1e-9);
            defects.push_back(json{{"n", n}, {"defect", d}});
        }
        j["sizes"] = g.sizes();
        j["trace_Qstar"] = traces;
        j["corner_values"] = corners;
        j["cross_defects"] = g.cross_defects;
        j["stabilization_index"] = st.index ? json(*st.index) : json(nullptr);
        j["measure_defect"] = defects;
        j["pass"] = pass;
        emit(c, j);
        return pass ? 0 : 1;
    }
};

template <class S>
struct SpectraCmd {
    static int run(const GrowthArgs& a, const Common& c) {
        json j{{"command", "spectra"}, {"kappa", a.kappa}};
        auto f = growth_factor<S>(a, j);
        auto rep = spectral_check(grow(f, a.kappa, default_init<S>(), a.cap), 1e-9);
        bool pass = rep.pass(is_exact_v<S> ? 0.0 : 1e-9);
        j["report"] = rep.to_json();
        j["pass"] = pass;
        emit(c, j);
        return pass ? 0 : 1;
    }
};

template <class S>
struct DensityCmd {
    static int run(const GrowthArgs& a, const Common& c) {
        json j{{"command", "density"}, {"n", a.n}, {"kappa_max", a.kappa}};
        auto f = growth_factor<S>(a, j);
        auto rows = density_table(f, a.n, a.kappa, a.cap);
        if (c.csv) {
            emit(c, density_table_csv(rows));
        } else {
            j["density_table"] = density_table_json(rows);
            emit(c, j);
        }
        return 0;
    }
};

template <class S>
struct LimitCmd {
    static int run(const GrowthArgs& a, const Common& c) {
        json j{{"command", "limit"}, {"size", a.size}};
        auto f = growth_factor<S>(a, j);
        auto corners = corner_analysis(f);
        j["corners"] = corners.to_json();
        if (!corners.stabilizing()) {
            j["stabilizing"] = false;
            j["pass"] = false;
            emit(c, j);
            return 1;
        }
        auto rep = limit_truncation(f, static_cast<std::size_t>(a.size));
        bool pass = is_exact_v<S> ? rep.exact_zero : rep.rewriting_residual <= 1e-9 && rep.stabilization_defect <= 1e-9;
        j["stabilizing"] = true;
        j["limit"] = rep.to_json();
        j["pass"] = pass;
        emit(c, j);
        return pass ? 0 : 1;
    }
};

void add_common(CLI::App* s, Common& c) {
    s->add_option("--out", c.out, "Write the output to a file instead of stdout");
    s->add_option("--mode", c.mode, "Scalar mode: exact, gaussian or float (inferred from the parameters)")
        ->check(CLI::IsMember({"exact", "rational", "gaussian", "float", "complex"}));
    s->add_option("--threads", c.threads, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
}

void add_params(CLI::App* s, Params& p, bool sign = true) {
    s->add_option("--p", p.p, "First parameter (a/b is exact, decimals are float)");
    s->add_option("--q", p.q, "Second parameter (q, or p2 for the bicolour gas)");
    s->add_option("--tol", p.tol, "Float tolerance");
    if (sign) s->add_option("--sign", p.sign, "Branch of the catalog square roots")->check(CLI::IsMember({-1, 1}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directed animals and gases: enumeration, transfer matrices, factor solutions and Kronecker growth"};
    app.require_subcommand(1);
    Common common;
    std::function<int()> action;

    EnumerateArgs en;
    auto* s_en = app.add_subcommand("enumerate", "Enumerate directed animals");
    add_common(s_en, common);
    s_en->add_option("--lattice", en.lattice, "Lattice (sq)");
    s_en->add_option("--width", en.width, "Cylinder width or 'plane'");
    s_en->add_option("--sources", en.sources, "Source columns in row 0")->delimiter(',');
    s_en->add_option("--sources2", en.sources2, "Colour-2 source columns (bicolour)")->delimiter(',');
    s_en->add_option("--max-area", en.max_area, "Largest area")->required();
    s_en->add_option("--weight", en.weight, "perimeter, bonds or bicolour");
    s_en->add_option("--rule", en.rule, "Bicolour rule: reach or literal");
    s_en->add_flag("--oversource", en.oversource, "Over-source generating function");
    s_en->add_flag("--csv", common.csv, "Area counts as CSV");
    s_en->callback([&] { action = [&] { return run_enumerate(en, common); }; });

    GasArgs ga;
    for (const char* name : {"transfer", "invariant"}) {
        auto* s = app.add_subcommand(name, std::string(name) == "transfer" ? "Transfer matrix of a gas"
                                                                          : "Invariant measure of a gas");
        add_common(s, common);
        add_params(s, ga.params, false);
        s->add_option("--gas", ga.gas, "x, y, b or bicolour");
        s->add_option("--width", ga.width, "Cylinder width")->check(CLI::PositiveNumber);
        if (std::string(name) == "transfer") {
            s->add_flag("--zigzag", ga.zigzag, "Square-lattice zigzag transfer");
            s->add_flag("--triangular", ga.triangular, "Triangular zigzag transfer");
            s->callback([&] {
                action = [&] {
                    return with_plain_scalar<TransferCmd>(resolve_mode(common.mode, {ga.params.p, ga.params.q}), ga,
                                                          common);
                };
            });
        } else {
            s->add_flag("--csv", common.csv, "Measure as CSV");
            s->callback([&] {
                action = [&] {
                    return with_plain_scalar<InvariantCmd>(resolve_mode(common.mode, {ga.params.p, ga.params.q}), ga,
                                                           common);
                };
            });
        }
    }

    IdentityArgs id;
    auto* s_id = app.add_subcommand("identity", "Compare a gas probability with an animal series");
    add_common(s_id, common);
    add_params(s_id, id.params, false);
    s_id->add_option("--which", id.which, "fo-x, fo-y, bond, bond-gas or bicolour");
    s_id->add_option("--width", id.width, "Cylinder width")->check(CLI::PositiveNumber);
    s_id->add_option("--max-area", id.max_area, "Largest area of the partial sum");
    s_id->add_option("--sources", id.sources, "Source columns")->delimiter(',');
    s_id->add_option("--sources2", id.sources2, "Colour-2 source columns")->delimiter(',');
    s_id->callback([&] { action = [&] { return run_identity(id, common); }; });

    VerifyArgs ve;
    auto* s_ve = app.add_subcommand("verify", "Residuals of a solution on its quadratic system");
    add_common(s_ve, common);
    add_params(s_ve, ve.params);
    s_ve->add_option("--system", ve.system, "Catalog id or system kind");
    s_ve->add_option("--solution", ve.solution, "Solution JSON file, or 'catalog'");
    s_ve->add_option("--n", ve.n, "Width of the measure check")->check(CLI::PositiveNumber);
    s_ve->callback([&] { action = [&] { return run_verify(ve, common); }; });

    SolveArgs so;
    auto* s_so = app.add_subcommand("solve", "Multi-start Newton search on a quadratic system");
    add_common(s_so, common);
    add_params(s_so, so.params, false);
    s_so->add_option("--system", so.system, "System kind");
    s_so->add_option("--gas", so.gas, "Gas for non-factor systems");
    s_so->add_option("--size", so.size, "Matrix or pattern size")->check(CLI::PositiveNumber);
    s_so->add_option("--starts", so.newton.starts, "Random starts")->check(CLI::PositiveNumber);
    s_so->add_option("--seed", so.newton.seed, "Random seed");
    s_so->add_option("--max-iter", so.newton.max_iter, "Iterations per start");
    s_so->add_flag("--trace-one", so.trace_one, "finite-split: trace normalization");
    s_so->add_flag("--cnt", so.cnt, "zigzag: det(M - I) = 0");
    s_so->add_flag("--c1-one", so.c1_one, "factor: c1 = 1");
    s_so->add_flag("--d1-one", so.d1_one, "factor: d1 = 1");
    s_so->add_flag("--corner", so.corner, "factor-Y: corner constraint");
    s_so->add_flag("--printed", so.printed, "factor-Y: printed equation list");
    s_so->callback([&] {
        so.newton.tol = so.params.tol;
        action = [&] { return run_solve(so, common); };
    });

    GrowthArgs gr;
    struct GrowthSub {
        const char* name;
        const char* help;
        std::function<int(Mode)> run;
    };
    std::vector<GrowthSub> growth_subs{
        {"grow", "Kronecker growth and trace-measure check",
         [&](Mode m) { return with_factor_scalar<GrowCmd>(m, gr, common); }},
        {"spectra", "Spectral diagnostics of the grown family",
         [&](Mode m) { return with_factor_scalar<SpectraCmd>(m, gr, common); }},
        {"density", "Density table along the growth",
         [&](Mode m) { return with_factor_scalar<DensityCmd>(m, gr, common); }},
        {"limit", "Corner analysis and truncated limit family",
         [&](Mode m) { return with_factor_scalar<LimitCmd>(m, gr, common); }}};
    for (auto& sub : growth_subs) {
        auto* s = app.add_subcommand(sub.name, sub.help);
        add_common(s, common);
        add_params(s, gr.params);
        s->add_option("--factor", gr.factor, "Factor catalog id");
        s->add_option("--gas", gr.gas, "Gas (checked against the factor)");
        s->add_option("--cap", gr.cap, "Matrix size cap");
        const std::string name = sub.name;
        if (name == "density") {
            s->add_option("--kappa-max", gr.kappa, "Largest kappa");
            s->add_option("--n", gr.n, "Cylinder width")->check(CLI::PositiveNumber);
            s->add_flag("--csv", common.csv, "Table as CSV");
        } else if (name == "limit") {
            s->add_option("--size", gr.size, "Truncation size")->check(CLI::PositiveNumber);
        } else {
            s->add_option("--kappa", gr.kappa, "Growth depth")->check(CLI::NonNegativeNumber);
        }
        if (name == "grow") {
            s->add_option("--n-max", gr.n_max, "Largest width of the measure check")->check(CLI::PositiveNumber);
            s->add_option("--entry", gr.entry, "Lazy entry I,J at depth kappa")->delimiter(',');
        }
        auto run = sub.run;
        s->callback([&, run] {
            action = [&, run] {
                default_params(gr.params);
                return run(resolve_mode(common.mode, {gr.params.p, gr.params.q}));
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
    } catch (const SizeCapExceeded& e) {
        std::cerr << "size cap exceeded: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
}
