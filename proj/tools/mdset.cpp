// Command-line front end: reads a JSON config, runs one operation, emits
// JSON-lines records (and CSV series for cover/boxcount). Exit codes:
// 0 pass, 1 verification failure, 2 usage/config error, 3 guard refusal.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mdset/boxcount.hpp"
#include "mdset/cover.hpp"
#include "mdset/dim_formulas.hpp"
#include "mdset/error.hpp"
#include "mdset/measure.hpp"
#include "mdset/mtp.hpp"
#include "mdset/psi.hpp"
#include "mdset/set_core.hpp"
#include "mdset/verify.hpp"

using nlohmann::json;
using namespace mdset;

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

// Everything one handler needs besides its parsed config.
struct Ctx {
    std::string config_hash;
    std::uint64_t seed = 0;
    int threads = 1;
    std::ostream* payload = nullptr; // --out target (or stdout)
};

void stamp(json& rec, const Ctx& ctx) {
    rec["config_hash"] = ctx.config_hash;
    rec["version"] = kVersion;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw invalid_argument_error("cannot open config: " + path);
    return json::parse(in);
}

// Configs may state the guard ceilings they expect; demanding more than the
// compiled caps is a config error, not a runtime refusal.
void validate_guards(const json& cfg) {
    if (!cfg.contains("guards")) return;
    const auto& g = cfg.at("guards");
    const struct {
        const char* key;
        std::uint64_t cap;
    } caps[] = {
        {"enum_words", kEnumGuard},
        {"grid_cells", kCellGuard},
        {"refine", static_cast<std::uint64_t>(kRefineGuard)},
        {"scan", static_cast<std::uint64_t>(kScanGuard)},
        {"expand", kExpandGuard},
    };
    for (const auto& c : caps) {
        if (!g.contains(c.key)) continue;
        const auto v = g.at(c.key).get<long long>();
        if (v <= 0 || static_cast<std::uint64_t>(v) > c.cap)
            throw invalid_argument_error(std::string("guards.") + c.key +
                                         " must be positive and within the hard cap");
    }
}

ProductSet parse_set(const json& j) {
    ProductSet ps;
    ps.base = j.at("base").get<int>();
    for (const auto& c : j.at("coords")) {
        DigitSet ds;
        ds.base = ps.base;
        for (const auto& d : c) ds.digits.push_back(d.get<int>());
        ps.coords.push_back(std::move(ds));
    }
    ps.validate();
    return ps;
}

std::vector<double> parse_weights(const json& j, int d) {
    auto t = j.get<std::vector<double>>();
    validate_weights(d, t);
    return t;
}

PsiSpec parse_psi(const json& j) {
    const auto fam = j.at("family").get<std::string>();
    PsiSpec spec;
    if (fam == "power") {
        spec = PsiSpec::make_power(j.at("c").get<double>());
    } else if (fam == "powerlog") {
        spec = PsiSpec::make_powerlog(j.at("c").get<double>(), j.at("e").get<double>());
    } else if (fam == "table") {
        std::vector<std::pair<int, double>> rows;
        for (const auto& r : j.at("table"))
            rows.emplace_back(r.at(0).get<int>(), r.at(1).get<double>());
        spec = PsiSpec::make_table(std::move(rows));
    } else {
        throw invalid_argument_error("psi: unknown family " + fam);
    }
    spec.validate();
    return spec;
}

// Point forms: {"num": [p_1..p_d], "den_pow": n} meaning x_i = p_i / base^n,
// or an array of per-coordinate digit streams {"prefix": [...], "period": [...]}.
PointDigits parse_point(const json& j, const ProductSet& ps) {
    PointDigits x;
    const auto d = static_cast<std::size_t>(ps.dim());
    if (j.is_object() && j.contains("num")) {
        const auto& nums = j.at("num");
        if (!nums.is_array() || nums.size() != d)
            throw invalid_argument_error("point: num needs one entry per coordinate");
        const int p = j.at("den_pow").get<int>();
        if (p < 0 || p > 64) throw invalid_argument_error("point: den_pow out of range");
        const BigInt dn = ipow(BigInt(ps.base), static_cast<unsigned>(p));
        for (std::size_t i = 0; i < d; ++i) {
            const auto v = nums[i].get<long long>();
            if (v < 0 || BigInt(v) > dn)
                throw invalid_argument_error("point: numerator outside [0, base^den_pow]");
            x.coords.push_back(alphabet_expand(ps.coords[i], Rational(BigInt(v), dn)));
        }
    } else if (j.is_array()) {
        if (j.size() != d) throw invalid_argument_error("point: need one stream per coordinate");
        for (const auto& cj : j) {
            CoordDigits cd;
            if (cj.contains("prefix"))
                for (const auto& g : cj.at("prefix")) cd.prefix.push_back(g.get<int>());
            for (const auto& g : cj.at("period")) cd.period.push_back(g.get<int>());
            x.coords.push_back(std::move(cd));
        }
    } else {
        throw invalid_argument_error("point: expected num/den_pow object or stream array");
    }
    validate_point(ps, x);
    return x;
}

std::vector<int> one_based(const std::vector<int>& zero_based) {
    std::vector<int> out;
    for (const int k : zero_based) out.push_back(k + 1);
    return out;
}

int cmd_dim(const json& cfg, const Ctx& ctx, bool euclidean) {
    json rec;
    rec["record"] = "dim";
    DimBreakdown br;
    if (euclidean) {
        const auto t = cfg.at("t").get<std::vector<double>>();
        br = euclidean_weighted_dim(static_cast<int>(t.size()), t);
        rec["space"] = "euclidean";
    } else {
        const auto ps = parse_set(cfg.at("set"));
        const auto t = parse_weights(cfg.at("t"), ps.dim());
        br = weighted_dim(ps, t);
        rec["space"] = "product";
    }
    rec["dim"] = br.value;
    rec["argmin"] = one_based(br.argmin);
    rec["per_coordinate"] = br.per_k;
    stamp(rec, ctx);
    *ctx.payload << rec.dump() << "\n";
    return 0;
}

int cmd_mtp(const json& cfg, const Ctx& ctx) {
    const json& ij = cfg.contains("instance") ? cfg.at("instance") : cfg;
    MtpInstance inst;
    inst.delta = ij.at("delta").get<std::vector<double>>();
    inst.a = ij.contains("a") ? ij.at("a").get<std::vector<double>>()
                              : std::vector<double>(inst.delta.size(), 1.0);
    inst.t = ij.contains("t") ? ij.at("t").get<std::vector<double>>()
                              : std::vector<double>(inst.delta.size(), 0.0);
    inst.kappa = ij.value("kappa", 0.0);
    inst.validate();
    const auto mn = min_dimension_number(inst);
    json rec;
    rec["record"] = "mtp";
    rec["dim"] = mn.value;
    rec["argmin_A"] = mn.argmin_A;
    rec["candidates"] = mn.candidates;
    rec["per_A"] = mn.per_A;
    stamp(rec, ctx);
    *ctx.payload << rec.dump() << "\n";
    return 0;
}

int cmd_cover(const json& cfg, const Ctx& ctx) {
    const auto ps = parse_set(cfg.at("set"));
    const auto psi = parse_psi(cfg.at("psi"));
    const auto t = parse_weights(cfg.at("t"), ps.dim());
    std::size_t k = 0;
    if (cfg.contains("k")) {
        const int kk = cfg.at("k").get<int>();
        if (kk < 1 || kk > ps.dim())
            throw invalid_argument_error("cover: k out of range (coordinates are 1-based)");
        k = static_cast<std::size_t>(kk - 1);
    } else {
        k = static_cast<std::size_t>(weighted_dim(ps, t).argmin.front());
    }
    const double s0 = s0_threshold(ps, t, k);
    const double s =
        cfg.contains("s") ? cfg.at("s").get<double>() : s0 + cfg.value("s_offset", 0.0);
    const int n0 = cfg.value("n0", 1);
    const int n_max = cfg.value("n_max", n0 + 60);
    const auto mode_name = cfg.value("mode", std::string("exact"));
    CoverBoundMode mode = CoverBoundMode::exact_count;
    if (mode_name == "analytic")
        mode = CoverBoundMode::analytic;
    else if (mode_name != "exact")
        throw invalid_argument_error("cover: mode must be \"exact\" or \"analytic\"");
    const auto rep = upper_sum(ps, psi, t, k, s, n0, n_max, mode);

    json rec;
    rec["record"] = "cover";
    rec["k"] = static_cast<int>(k) + 1;
    rec["s"] = s;
    rec["s0"] = s0;
    rec["n0"] = n0;
    rec["n_max"] = n_max;
    rec["mode"] = mode_name;
    rec["log_sum"] = rep.log_sum;
    rec["log_first"] = rep.log_first;
    rec["log_last"] = rep.log_last;
    stamp(rec, ctx);
    std::cout << rec.dump() << "\n";

    *ctx.payload << "n,log_term\n" << std::setprecision(17);
    for (const auto& [n, v] : rep.log_terms) *ctx.payload << n << "," << v << "\n";
    return 0;
}

int cmd_boxcount(const json& cfg, const Ctx& ctx) {
    const auto ps = parse_set(cfg.at("set"));
    const auto mode = cfg.value("mode", cfg.contains("n_list") ? std::string("generations")
                                                               : std::string("attractor"));
    json rec;
    rec["record"] = "boxcount";
    rec["mode"] = mode;
    if (mode == "attractor") {
        const auto m_list = cfg.at("m_list").get<std::vector<long long>>();
        if (m_list.empty()) throw invalid_argument_error("boxcount: m_list is empty");
        std::vector<std::pair<unsigned, BigInt>> series;
        for (const auto m : m_list) {
            if (m < 0) throw invalid_argument_error("boxcount: m must be >= 0");
            series.emplace_back(static_cast<unsigned>(m),
                                box_count_attractor(ps, static_cast<unsigned>(m)));
        }
        if (series.size() >= 3) {
            const auto fit = slope_fit(ps.base, series);
            rec["slope"] = fit.slope;
            rec["std_error"] = fit.std_error;
        } else {
            rec["slope"] = nullptr;
            rec["std_error"] = nullptr;
        }
        stamp(rec, ctx);
        std::cout << rec.dump() << "\n";
        *ctx.payload << "m,count\n";
        for (const auto& [m, c] : series) *ctx.payload << m << "," << c.str() << "\n";
        return 0;
    }
    if (mode != "generations")
        throw invalid_argument_error("boxcount: mode must be \"attractor\" or \"generations\"");

    const auto psi = parse_psi(cfg.at("psi"));
    const auto t = parse_weights(cfg.at("t"), ps.dim());
    const auto x = cfg.contains("x") ? parse_point(cfg.at("x"), ps) : min_fixed_point(ps);
    const auto ns = cfg.at("n_list").get<std::vector<long long>>();
    std::vector<unsigned> n_list;
    for (const auto n : ns) {
        if (n < 0) throw invalid_argument_error("boxcount: n must be >= 0");
        n_list.push_back(static_cast<unsigned>(n));
    }
    const auto policy_name = cfg.value("policy", std::string("nearest"));
    GridPolicy policy = GridPolicy::nearest;
    if (policy_name == "finer")
        policy = GridPolicy::finer;
    else if (policy_name == "coarser")
        policy = GridPolicy::coarser;
    else if (policy_name != "nearest")
        throw invalid_argument_error("boxcount: policy must be nearest, finer, or coarser");

    const auto probe = empirical_dimension_probe(ps, x, psi, t, n_list, ctx.threads, policy);
    rec["reference"] = probe.reference;
    rec["matched_coordinate"] = probe.matched_coord + 1;
    rec["policy"] = policy_name;
    json rows = json::array();
    for (const auto& r : probe.rows) {
        json row;
        row["n"] = r.n;
        row["m"] = r.m;
        row["count"] = r.count.convert_to<std::uint64_t>();
        row["exponent"] = r.exponent;
        rows.push_back(std::move(row));
    }
    rec["rows"] = std::move(rows);
    stamp(rec, ctx);
    std::cout << rec.dump() << "\n";
    *ctx.payload << "n,exponent\n" << std::setprecision(17);
    for (const auto& r : probe.rows) *ctx.payload << r.n << "," << r.exponent << "\n";
    return 0;
}

const char* verdict_name(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::divergent: return "divergent";
        case SeriesVerdict::convergent: return "convergent";
        default: return "inconclusive";
    }
}

const char* proof_name(ProofVerdict v) {
    switch (v) {
        case ProofVerdict::proved: return "proved";
        case ProofVerdict::refuted: return "refuted";
        default: return "sampled_only";
    }
}

const char* volume_name(VolumeVerdict v) {
    switch (v) {
        case VolumeVerdict::zero: return "zero";
        case VolumeVerdict::full: return "full";
        default: return "inconclusive";
    }
}

int cmd_series(const json& cfg, const Ctx& ctx) {
    const json& pj = cfg.contains("psi") ? cfg.at("psi") : cfg;
    const auto spec = parse_psi(pj);
    const int base = cfg.value("base", 3);
    const int n_max = cfg.value("n_max", 40);

    json rec;
    rec["record"] = "series";
    const auto mono = monotone_check(spec, base, n_max);
    rec["monotone"] = {{"pass", mono.pass},
                       {"fail_n", mono.pass ? json() : json(mono.fail_n)},
                       {"checked", mono.checked}};
    if (cfg.contains("exponent")) {
        const double s = cfg.at("exponent").get<double>();
        rec["exponent"] = s;
        rec["sum"] = verdict_name(classify_series(spec, base, s));
    } else {
        rec["exponent"] = nullptr;
        rec["sum"] = nullptr;
    }
    if (cfg.contains("gamma")) {
        const double gamma = cfg.at("gamma").get<double>();
        const auto eps = cfg.contains("eps_list") ? cfg.at("eps_list").get<std::vector<double>>()
                                                  : std::vector<double>{0.5, 0.1, 0.01};
        rec["tail"] = proof_name(tail_condition_check(spec, base, gamma, eps).overall);
    } else {
        rec["tail"] = nullptr;
    }
    if (cfg.contains("volume")) {
        const auto& vj = cfg.at("volume");
        std::vector<PsiSpec> specs;
        for (const auto& sj : vj.at("specs")) specs.push_back(parse_psi(sj));
        rec["volume"] = volume_name(volume_sum_classifier(vj.at("d").get<int>(), specs));
    } else {
        rec["volume"] = nullptr;
    }
    stamp(rec, ctx);
    *ctx.payload << rec.dump() << "\n";
    return 0;
}

int cmd_verify(const Ctx& ctx, bool corrupt) {
    VerifyOptions opt;
    opt.seed = ctx.seed;
    opt.threads = ctx.threads;
    opt.corrupt_measure = corrupt;
    const auto suites = run_verify_suites(opt);
    std::uint64_t total = 0;
    for (const auto& s : suites) {
        json rec;
        rec["record"] = "verify-suite";
        rec["suite"] = s.name;
        rec["cases"] = s.cases;
        rec["failures"] = s.failures;
        rec["counterexample"] = s.failures ? json(s.first_failure) : json();
        stamp(rec, ctx);
        *ctx.payload << rec.dump() << "\n";
        total += s.failures;
    }
    json rec;
    rec["record"] = "verify-summary";
    rec["suites"] = suites.size();
    rec["failures"] = total;
    rec["pass"] = total == 0;
    stamp(rec, ctx);
    *ctx.payload << rec.dump() << "\n";
    return total == 0 ? 0 : 1;
}

int run(int argc, char** argv) {
    CLI::App app{"missing-digit product set dimension toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int threads = 1;
    bool euclidean = false;
    bool corrupt = false;

    const auto add_common = [&](CLI::App* sc) {
        sc->add_option("--config", config_path, "JSON config file");
        sc->add_option("--seed", seed, "seed for randomized suites");
        sc->add_option("--threads", threads, "worker threads for grid counts");
        sc->add_option("--out", out_path, "write the payload here instead of stdout");
    };

    auto* dim = app.add_subcommand("dim", "closed-form weighted dimension");
    add_common(dim);
    dim->add_flag("--euclidean", euclidean, "full-space variant (needs only t)");
    auto* mtp = app.add_subcommand("mtp", "transference dimension-number minimum");
    add_common(mtp);
    auto* cover = app.add_subcommand("cover", "truncated cover cost series");
    add_common(cover);
    auto* boxcount = app.add_subcommand("boxcount", "grid counts and probe exponents");
    add_common(boxcount);
    auto* series = app.add_subcommand("series", "speed-function classifiers");
    add_common(series);
    auto* verify = app.add_subcommand("verify", "run the verification battery");
    add_common(verify);
    verify->add_flag("--corrupt-measure", corrupt, "inject a wrong weight (must fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const json cfg = load_config(config_path);
    validate_guards(cfg);

    Ctx ctx;
    const auto* sub = app.get_subcommands().front();
    ctx.seed = seed;
    ctx.threads = threads;
    ctx.config_hash =
        hex64(fnv1a(sub->get_name() + "\n" + cfg.dump() + "\n" + std::to_string(seed)));

    std::ofstream out_file;
    ctx.payload = &std::cout;
    if (!out_path.empty()) {
        out_file.open(out_path);
        if (!out_file) throw invalid_argument_error("cannot open --out path: " + out_path);
        ctx.payload = &out_file;
    }

    if (sub == dim) return cmd_dim(cfg, ctx, euclidean);
    if (sub == mtp) return cmd_mtp(cfg, ctx);
    if (sub == cover) return cmd_cover(cfg, ctx);
    if (sub == boxcount) return cmd_boxcount(cfg, ctx);
    if (sub == series) return cmd_series(cfg, ctx);
    return cmd_verify(ctx, corrupt);
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const invalid_argument_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const guard_error& e) {
        std::cerr << "guard refusal: " << e.what() << "\n";
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
