// charsum: evaluate multilinear character sums over F_p exactly, compute the
// explicit bound expressions, run the lemma-verification sweeps, and execute
// the constructive searches. Exit codes: 0 ok, 1 a constant-free inequality
// was violated, 2 usage/config error, 3 resource ceiling.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "charsum/bounds.hpp"
#include "charsum/engines.hpp"
#include "charsum/oracles.hpp"
#include "charsum/rng.hpp"
#include "charsum/search.hpp"

using namespace charsum;
using nlohmann::json;

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_ld(long double v) { return fmt_g(static_cast<double>(v)); }

struct Output {
    std::string path;  // empty = stdout
    std::ofstream file;

    std::ostream& stream() {
        if (path.empty()) return std::cout;
        if (!file.is_open()) file.open(path);
        return file;
    }
};

unsigned default_threads() {
    if (const char* env = std::getenv("CHARSUM_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

std::vector<std::complex<double>> load_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::bad_range, "cannot open weight file " + path);
    std::vector<std::complex<double>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double re = 0, im = 0;
        ss >> re;
        if (!(ss >> im)) im = 0;
        out.push_back({re, im});
    }
    return out;
}

// Grammar: one | indicator:file=<path> | prime | divisor | random:seed=<u64>
//        | table:file=<path> | legendre:q=<odd prime>
WeightSpec parse_weight_spec(const std::string& text, u64 rows, u64 cols) {
    if (text == "one") return OneWeight{};
    if (text == "prime") return PrimeIndicator{};
    if (text == "divisor") return DivisorFn{};
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    const auto eq = arg.find('=');
    const std::string key = arg.substr(0, eq);
    const std::string val = eq == std::string::npos ? "" : arg.substr(eq + 1);
    if (head == "random" && key == "seed") return RandomUnit{std::strtoull(val.c_str(), nullptr, 10)};
    if (head == "legendre" && key == "q") return LegendrePair{std::strtoull(val.c_str(), nullptr, 10)};
    if ((head == "indicator" || head == "table") && key == "file") {
        TableValues t;
        t.values = load_values(val);
        if (head == "indicator")
            for (auto& v : t.values) v = {v.real() != 0.0 ? 1.0 : 0.0, 0.0};
        t.rows = rows;
        t.cols = cols;
        return t;
    }
    fail(errc::bad_range, "unknown weight spec '" + text + "'");
}

struct CharChoice {
    bool legendre = true;
    u64 j = 0;
};

CharChoice parse_char(const std::string& text) {
    if (text == "legendre") return {true, 0};
    return {false, std::strtoull(text.c_str(), nullptr, 10)};
}

Poly1 parse_poly1(const std::string& text) {
    Poly1 p;
    p.coeff.clear();
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) p.coeff.push_back(std::strtoull(tok.c_str(), nullptr, 10));
    if (p.coeff.empty()) p.coeff = {0};
    return p;
}

Poly2 parse_poly2(const std::string& text) {
    Poly2 p;
    p.coeff.clear();
    std::istringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::vector<u64> r;
        std::istringstream ss(row);
        std::string tok;
        while (std::getline(ss, tok, ',')) r.push_back(std::strtoull(tok.c_str(), nullptr, 10));
        if (r.empty()) r = {0};
        p.coeff.push_back(std::move(r));
    }
    if (p.coeff.empty()) p.coeff = {{0}};
    return p;
}

// ----------------------------------------------------------------------
// CSV sweep schema (one schema serves every kind; absent fields are empty)
// ----------------------------------------------------------------------

const char* kCsvHeader =
    "p,r,a,b,K,L,M,N,sum_re,sum_im,sum_abs,trivial_inf,vinogradov,karatsuba,delta1,delta2,"
    "delta3,ratio_trivial,ratio_delta1,ratio_delta2,ratio_delta3,applicable_flags";

struct SweepRow {
    u64 p = 0;
    unsigned r = 1;
    i64 a = 1, b = 1;
    u64 K = 0, L = 0, M = 0, N = 0;  // 0 prints as empty
    SumValue sum;
    BoundReport report;
};

std::string csv_cell_u64(u64 v) { return v == 0 ? "" : std::to_string(v); }

std::string csv_row(const SweepRow& row) {
    std::ostringstream out;
    out << row.p << ',' << row.r << ',' << row.a << ',' << row.b << ',' << csv_cell_u64(row.K)
        << ',' << csv_cell_u64(row.L) << ',' << csv_cell_u64(row.M) << ',' << csv_cell_u64(row.N)
        << ',' << fmt_g(row.sum.approx.real()) << ',' << fmt_g(row.sum.approx.imag()) << ','
        << fmt_g(row.sum.abs());
    auto bound_cell = [&](const char* name) {
        const auto* e = row.report.find(name);
        out << ',' << (e ? fmt_ld(e->value) : "");
    };
    bound_cell("trivial_inf");
    bound_cell("vinogradov");
    bound_cell("karatsuba");
    bound_cell("delta1");
    bound_cell("delta2");
    bound_cell("delta3");
    auto ratio_cell = [&](const char* name) {
        const auto* e = row.report.find(name);
        out << ',' << (e ? fmt_g(e->ratio) : "");
    };
    ratio_cell("trivial_inf");
    ratio_cell("delta1");
    ratio_cell("delta2");
    ratio_cell("delta3");
    out << ',';
    bool first = true;
    for (const char* name : {"delta1", "delta2", "delta3", "q2"}) {
        const auto* e = row.report.find(name);
        if (!e) continue;
        if (!first) out << ';';
        out << name << '=' << (e->applicable ? 1 : 0);
        first = false;
    }
    return out.str();
}

json row_json(const SweepRow& row) {
    json j;
    j["p"] = row.p;
    j["r"] = row.r;
    j["a"] = row.a;
    j["b"] = row.b;
    if (row.K) j["K"] = row.K;
    if (row.L) j["L"] = row.L;
    if (row.M) j["M"] = row.M;
    if (row.N) j["N"] = row.N;
    j["sum_re"] = row.sum.approx.real();
    j["sum_im"] = row.sum.approx.imag();
    j["sum_abs"] = row.sum.abs();
    j["terms"] = row.sum.terms;
    for (const auto& e : row.report.entries) {
        j["bound_" + e.name] = static_cast<double>(e.value);
        j["ratio_" + e.name] = e.ratio;
        j["applicable_" + e.name] = e.applicable;
    }
    return j;
}

// ----------------------------------------------------------------------
// eval command
// ----------------------------------------------------------------------

struct EvalArgs {
    std::string kind = "tri";
    u64 p = 5;
    std::string chr = "legendre";
    i64 a = 1, b = 1;
    u64 K = 1, L = 1, M = 1, N = 1, U = 1, V = 1, x = 1, R = 2;
    std::string alpha = "one", beta = "one";
    u64 psi_t = 1;
    std::string P = "0", Pden = "1", Q = "0", Qden = "1";
    bool kronecker_two = false;
    unsigned threads = 0;
    std::string format = "plain";  // plain | csv | records
    std::string output;
    unsigned r = 2;
};

SumKind kind_from_string(const std::string& s) {
    if (s == "bi" || s == "bilinear") return SumKind::bilinear;
    if (s == "tri" || s == "trilinear") return SumKind::trilinear;
    if (s == "quad" || s == "quadrilinear") return SumKind::quadrilinear;
    if (s == "fsquad" || s == "fs_quad") return SumKind::fs_quad;
    if (s == "mixed-add" || s == "mixed_additive") return SumKind::mixed_additive;
    if (s == "mixed-mul" || s == "mixed_multiplicative") return SumKind::mixed_multiplicative;
    if (s == "divisor") return SumKind::divisor;
    if (s == "farey") return SumKind::farey;
    if (s == "primequad" || s == "prime_quad") return SumKind::prime_quad;
    fail(errc::bad_range, "unknown sum kind '" + s + "'");
}

SumSpec build_spec(const EvalArgs& args) {
    SumSpec spec;
    spec.kind = kind_from_string(args.kind);
    spec.p = args.p;
    const auto cc = parse_char(args.chr);
    spec.legendre_char = cc.legendre;
    spec.j = cc.j;
    spec.a = args.a;
    spec.b = args.b;
    spec.K = args.K;
    spec.L = args.L;
    spec.M = args.M;
    spec.N = args.N;
    spec.U = args.U;
    spec.V = args.V;
    spec.x = args.x;
    spec.R = args.R;
    spec.psi_t = args.psi_t;
    spec.P.num = parse_poly1(args.P);
    spec.P.den = parse_poly1(args.Pden);
    spec.Q.num = parse_poly2(args.Q);
    spec.Q.den = parse_poly2(args.Qden);
    spec.kronecker_two = args.kronecker_two;

    u64 arows = 0, acols = 0, brows = 0, bcols = 0;
    switch (spec.kind) {
        case SumKind::quadrilinear:
            arows = spec.L;
            acols = spec.M;
            brows = spec.K;
            bcols = spec.N;
            break;
        case SumKind::trilinear:
            brows = spec.K;
            bcols = spec.N;
            break;
        default:
            break;
    }
    spec.alpha = parse_weight_spec(args.alpha, arows, acols);
    spec.beta = parse_weight_spec(args.beta, brows, bcols);
    return spec;
}

BoundInputs inputs_for(const SumSpec& spec, const PrimeField& field, unsigned r) {
    BoundInputs in;
    in.p = static_cast<long double>(spec.p);
    in.r = r;
    in.a = static_cast<long double>(spec.a);
    in.b = static_cast<long double>(spec.b);
    switch (spec.kind) {
        case SumKind::trilinear: {
            const auto alpha = WeightTable::materialize_range(spec.alpha, 1, spec.M);
            const auto beta = WeightTable::materialize2(spec.beta, spec.K, spec.N);
            in.K = spec.K;
            in.M = spec.M;
            in.N = spec.N;
            in.total_terms = static_cast<long double>(spec.K) * spec.M * spec.N;
            in.norm1_alpha = alpha.norm(Rho::one);
            in.norm2_alpha = alpha.norm(Rho::two);
            in.normInf_alpha = alpha.norm(Rho::inf);
            in.norm2_beta = beta.norm(Rho::two);
            in.normInf_beta = beta.norm(Rho::inf);
            break;
        }
        case SumKind::quadrilinear: {
            const auto alpha = WeightTable::materialize2(spec.alpha, spec.L, spec.M);
            const auto beta = WeightTable::materialize2(spec.beta, spec.K, spec.N);
            in.K = spec.K;
            in.L = spec.L;
            in.M = spec.M;
            in.N = spec.N;
            in.total_terms = static_cast<long double>(spec.K) * spec.L * spec.M * spec.N;
            in.trilinear_deltas = false;
            in.norm2_alpha = alpha.norm(Rho::two);
            in.normInf_alpha = alpha.norm(Rho::inf);
            in.norm2_beta = beta.norm(Rho::two);
            in.normInf_beta = beta.norm(Rho::inf);
            break;
        }
        case SumKind::bilinear: {
            std::vector<u64> setM, setN;
            for (u64 m = 1; m <= spec.M; ++m) setM.push_back(m);
            for (u64 n = 1; n <= spec.N; ++n) setN.push_back(n);
            const auto alpha = WeightTable::materialize(spec.alpha, setM);
            const auto beta = WeightTable::materialize(spec.beta, setN);
            in.M = spec.M;
            in.N = spec.N;
            in.total_terms = static_cast<long double>(spec.M) * spec.N;
            in.norm1_alpha = alpha.norm(Rho::one);
            in.norm2_alpha = alpha.norm(Rho::two);
            in.normInf_alpha = alpha.norm(Rho::inf);
            in.norm2_beta = beta.norm(Rho::two);
            in.normInf_beta = beta.norm(Rho::inf);
            break;
        }
        case SumKind::fs_quad: {
            in.x = static_cast<long double>(spec.x);
            const auto alpha = WeightTable::materialize_range(spec.alpha, 1, spec.x);
            const auto beta = WeightTable::materialize_range(spec.beta, 1, spec.x);
            in.normInf_gamma = alpha.norm(Rho::inf) * beta.norm(Rho::inf);
            in.total_terms =
                static_cast<long double>(spec.x) * spec.x * spec.x * spec.x;
            in.normInf_alpha = alpha.norm(Rho::inf);
            in.normInf_beta = beta.norm(Rho::inf);
            break;
        }
        default:
            break;
    }
    (void)field;
    return in;
}

int cmd_eval(const EvalArgs& args) {
    const SumSpec spec = build_spec(args);
    const PrimeField field(spec.p);
    EngineOpts opts;
    opts.threads = args.threads ? args.threads : default_threads();
    const SumValue sum = evaluate(field, spec, opts);

    Output out{args.output};
    if (args.format == "plain") {
        if (const auto v = sum.exact_integer(spec.p)) {
            out.stream() << *v << "\n";
        } else {
            out.stream() << fmt_g(sum.approx.real()) << " " << fmt_g(sum.approx.imag()) << "\n";
        }
        return 0;
    }

    SweepRow row;
    row.p = spec.p;
    row.r = args.r;
    row.a = spec.a;
    row.b = spec.b;
    switch (spec.kind) {
        case SumKind::quadrilinear: row.L = spec.L; [[fallthrough]];
        case SumKind::trilinear:
        case SumKind::mixed_additive:
        case SumKind::mixed_multiplicative:
            row.K = spec.K;
            row.M = spec.M;
            row.N = spec.N;
            break;
        case SumKind::bilinear:
            row.M = spec.M;
            row.N = spec.N;
            break;
        default:
            break;  // x/U/V/R ranges have no schema column
    }
    row.sum = sum;
    row.report = bound_report(sum.abs(), inputs_for(spec, field, args.r));
    if (args.format == "csv") {
        out.stream() << kCsvHeader << "\n" << csv_row(row) << "\n";
    } else {
        out.stream() << row_json(row).dump() << "\n";
    }
    return 0;
}

// ----------------------------------------------------------------------
// sweep command
// ----------------------------------------------------------------------

struct SweepArgs {
    EvalArgs base;
    std::vector<std::string> grid;
};

int cmd_sweep(const SweepArgs& args) {
    std::vector<std::pair<std::string, std::vector<u64>>> axes;
    for (const auto& token : args.grid) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) fail(errc::bad_range, "grid token needs VAR=v1,v2,...");
        const std::string var = token.substr(0, eq);
        if (var != "K" && var != "L" && var != "M" && var != "N")
            fail(errc::bad_range, "grid variable must be one of K, L, M, N");
        std::vector<u64> values;
        std::istringstream ss(token.substr(eq + 1));
        std::string v;
        while (std::getline(ss, v, ',')) values.push_back(std::strtoull(v.c_str(), nullptr, 10));
        if (values.empty()) fail(errc::bad_range, "empty grid axis " + var);
        axes.emplace_back(var, std::move(values));
    }
    if (axes.empty()) fail(errc::bad_range, "sweep needs --grid");

    Output out{args.base.output};
    const bool csv = args.base.format != "records";
    if (csv) out.stream() << kCsvHeader << "\n";

    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
        EvalArgs point = args.base;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            const u64 v = axes[i].second[idx[i]];
            if (axes[i].first == "K") point.K = v;
            if (axes[i].first == "L") point.L = v;
            if (axes[i].first == "M") point.M = v;
            if (axes[i].first == "N") point.N = v;
        }
        const SumSpec spec = build_spec(point);
        const PrimeField field(spec.p);
        EngineOpts opts;
        opts.threads = point.threads ? point.threads : default_threads();
        SweepRow row;
        row.p = spec.p;
        row.r = point.r;
        row.a = spec.a;
        row.b = spec.b;
        row.K = spec.K;
        row.L = spec.kind == SumKind::quadrilinear ? spec.L : 0;
        row.M = spec.M;
        row.N = spec.N;
        row.sum = evaluate(field, spec, opts);
        row.report = bound_report(row.sum.abs(), inputs_for(spec, field, point.r));
        if (csv)
            out.stream() << csv_row(row) << "\n";
        else
            out.stream() << row_json(row).dump() << "\n";

        std::size_t axis = axes.size();
        while (axis > 0) {
            --axis;
            if (++idx[axis] < axes[axis].second.size()) break;
            idx[axis] = 0;
            if (axis == 0) return 0;
        }
    }
}

// ----------------------------------------------------------------------
// bound command
// ----------------------------------------------------------------------

struct BoundArgs {
    u64 p = 5;
    unsigned r = 2;
    i64 a = 1, b = 1;
    double K = 0, L = 0, M = 0, N = 0, x = 0, eta = 0;
    double norm1_alpha = 0, norm2_alpha = 0, normInf_alpha = 0;
    double norm2_beta = 0, normInf_beta = 0, normInf_gamma = 0;
    std::string format = "records";
    std::string output;
};

int cmd_bound(const BoundArgs& args) {
    BoundInputs in;
    in.p = args.p;
    in.r = args.r;
    in.a = args.a;
    in.b = args.b;
    auto set = [](std::optional<long double>& slot, double v) {
        if (v > 0) slot = static_cast<long double>(v);
    };
    set(in.K, args.K);
    set(in.L, args.L);
    set(in.M, args.M);
    set(in.N, args.N);
    set(in.x, args.x);
    set(in.eta, args.eta);
    set(in.norm1_alpha, args.norm1_alpha);
    set(in.norm2_alpha, args.norm2_alpha);
    set(in.normInf_alpha, args.normInf_alpha);
    set(in.norm2_beta, args.norm2_beta);
    set(in.normInf_beta, args.normInf_beta);
    set(in.normInf_gamma, args.normInf_gamma);
    if (in.K && in.M && in.N)
        in.total_terms = in.K.value() * in.M.value() * in.N.value() *
                         (in.L ? in.L.value() : 1.0L);

    Output out{args.output};
    json j;
    j["p"] = args.p;
    j["r"] = args.r;
    if (in.K && in.M && in.N) {
        const auto [l1, l2] =
            script_l(in.a, in.b, *in.K, in.L.value_or(1.0L), *in.M, *in.N);
        j["script_l1"] = static_cast<double>(l1);
        j["script_l2"] = static_cast<double>(l2);
        if (in.normInf_beta) {
            const auto d1 = delta1(in);
            j["delta1"] = static_cast<double>(d1.delta);
            j["delta1_bound"] = static_cast<double>(d1.bound);
            j["delta1_applicable"] = d1.applicable;
        }
        if (in.normInf_alpha && in.norm2_beta) {
            const auto d2 = delta2(in);
            j["delta2"] = static_cast<double>(d2.delta);
            j["delta2_bound"] = static_cast<double>(d2.bound);
            j["delta2_applicable"] = d2.applicable;
            if (in.L) {
                const auto d3 = delta3(in);
                j["delta3"] = static_cast<double>(d3.delta);
                j["delta3_bound"] = static_cast<double>(d3.bound);
                j["delta3_applicable"] = d3.applicable;
            }
        }
        if (in.eta) {
            const auto reg = region_nontrivial(in.p, *in.eta, *in.K, in.L.value_or(1.0L),
                                               *in.M, *in.N);
            j["region_passes"] = reg.passes;
            j["region_failed"] = reg.failed;
            j["k_choice"] = k_choice(in.p, in.r, *in.eta, *in.M, *in.N);
        }
    }
    if (in.norm2_alpha && in.norm2_beta)
        j["vinogradov"] = static_cast<double>(vinogradov_bound(in.p, *in.norm2_alpha,
                                                               *in.norm2_beta));
    if (in.norm1_alpha && in.norm2_alpha && in.normInf_beta && in.N)
        j["karatsuba"] = static_cast<double>(karatsuba_bound(
            in.p, in.r, *in.N, *in.norm1_alpha, *in.norm2_alpha, *in.normInf_beta));
    if (in.x && in.normInf_gamma) {
        const auto q2 = q2_bound(in.p, in.r, *in.x, *in.normInf_gamma);
        j["q2"] = static_cast<double>(q2.value);
        j["q2_applicable"] = q2.applicable;
    }
    if (args.format == "csv") {
        out.stream() << "key,value\n";
        for (const auto& [key, value] : j.items())
            out.stream() << key << ',' << value.dump() << "\n";
    } else {
        out.stream() << j.dump() << "\n";
    }
    return 0;
}

// ----------------------------------------------------------------------
// moments command (lemma sweeps; exit 1 on violation)
// ----------------------------------------------------------------------

struct MomentsArgs {
    u64 pmax = 31;
    unsigned trials = 50;
    u64 seed = 1;
    bool doubled = false;  // also sweep the two-character moment
    u64 pmax_double = 13;
    std::string format = "records";
    std::string output;
};

int cmd_moments(const MomentsArgs& args) {
    Output out{args.output};
    const bool csv = args.format == "csv";
    if (csv) out.stream() << "lemma,p,configs,violations\n";
    unsigned long long total_violations = 0;

    for (u64 p = 3; p <= args.pmax; p += 2) {
        if (!is_prime(p)) continue;
        const PrimeField field(p);
        unsigned long long configs = 0, violations = 0;
        Rng rng(splitmix64(args.seed ^ p));
        for (u64 j = 1; j <= p - 2; ++j) {
            const MultChar chi(field, j);
            for (unsigned r : {1u, 2u}) {
                for (u64 a = 0; a < p; ++a) {
                    auto res = moment_single(
                        chi, {a}, WeightTable::materialize_range(OneWeight{}, 1, 1), r);
                    ++configs;
                    if (!res.holds) ++violations;
                    for (u64 b2 = a + 1; b2 < p; ++b2) {
                        auto res2 = moment_single(
                            chi, {a, b2}, WeightTable::materialize_range(OneWeight{}, 1, 2), r);
                        ++configs;
                        if (!res2.holds) ++violations;
                    }
                }
                for (unsigned t = 0; t < args.trials; ++t) {
                    std::vector<u64> setA;
                    const u64 size = rng.between(1, p);
                    for (u64 i = 0; i < size; ++i) setA.push_back(rng.below(p));
                    std::sort(setA.begin(), setA.end());
                    setA.erase(std::unique(setA.begin(), setA.end()), setA.end());
                    TableValues signs;
                    for (std::size_t i = 0; i < setA.size(); ++i)
                        signs.values.push_back({rng.below(2) ? 1.0 : -1.0, 0.0});
                    auto res = moment_single(chi, setA,
                                             WeightTable::materialize(signs, setA), r);
                    ++configs;
                    if (!res.holds) ++violations;
                }
            }
        }
        total_violations += violations;
        if (csv) {
            out.stream() << "single," << p << ',' << configs << ',' << violations << "\n";
        } else {
            json j{{"lemma", "single"}, {"p", p}, {"configs", configs},
                   {"violations", violations}};
            out.stream() << j.dump() << "\n";
        }
    }

    if (args.doubled) {
        for (u64 p = 3; p <= args.pmax_double; p += 2) {
            if (!is_prime(p)) continue;
            const PrimeField field(p);
            unsigned long long configs = 0, violations = 0;
            for (u64 j1 = 1; j1 <= p - 2; ++j1) {
                const MultChar chi1(field, j1);
                for (u64 j2 = 1; j2 <= p - 2; ++j2) {
                    const MultChar chi2(field, j2);
                    for (unsigned r : {1u, 2u}) {
                        for (u64 a = 0; a < p; ++a) {
                            auto res = moment_double(
                                chi1, chi2, {a},
                                WeightTable::materialize_range(OneWeight{}, 1, 1), r);
                            ++configs;
                            if (!res.holds) ++violations;
                            for (u64 b2 = a + 1; b2 < p; ++b2) {
                                auto res2 = moment_double(
                                    chi1, chi2, {a, b2},
                                    WeightTable::materialize_range(OneWeight{}, 1, 2), r);
                                ++configs;
                                if (!res2.holds) ++violations;
                            }
                        }
                    }
                }
            }
            total_violations += violations;
            if (csv) {
                out.stream() << "double," << p << ',' << configs << ',' << violations << "\n";
            } else {
                json j{{"lemma", "double"}, {"p", p}, {"configs", configs},
                       {"violations", violations}};
                out.stream() << j.dump() << "\n";
            }
        }
    }
    return total_violations == 0 ? 0 : 1;
}

// ----------------------------------------------------------------------
// gcdsum / counts / search commands
// ----------------------------------------------------------------------

struct GcdArgs {
    i64 a = 1, b = 1;
    u64 A = 1, B = 1, K = 1, L = 1, M = 1, N = 1, U = 1, W = 1;
    std::string format = "records";
    std::string output;
};

int cmd_gcdsum(const GcdArgs& args) {
    const auto res = gcd_sum(args.a, args.b, args.A, args.B, args.K, args.L, args.M, args.N,
                             args.U, args.W);
    Output out{args.output};
    if (args.format == "csv") {
        out.stream() << "G,bound_sans_o1,ratio,upsilon,a_window_in_range,b_window_in_range\n"
                     << res.G << ',' << fmt_ld(res.bound_sans_o1) << ','
                     << fmt_ld(res.G / res.bound_sans_o1) << ',' << fmt_ld(res.upsilon) << ','
                     << res.a_window_in_range << ',' << res.b_window_in_range << "\n";
    } else {
        json j{{"G", res.G},
               {"bound_sans_o1", static_cast<double>(res.bound_sans_o1)},
               {"ratio", static_cast<double>(res.G / res.bound_sans_o1)},
               {"upsilon", static_cast<double>(res.upsilon)},
               {"a_window_in_range", res.a_window_in_range},
               {"b_window_in_range", res.b_window_in_range}};
        out.stream() << j.dump() << "\n";
    }
    return 0;
}

struct CountsArgs {
    std::string which = "i";
    u64 p = 5;
    i64 a = 1, b = 1;
    u64 d = 1, A = 1, B = 1, C = 1, K = 1, L = 1, M = 1, N = 1, U = 1, W = 1;
    bool paper_literal = false;
    std::string format = "records";
    std::string output;
};

int cmd_counts(const CountsArgs& args) {
    const PrimeField field(args.p);
    Output out{args.output};
    json j;
    j["which"] = args.which;
    j["p"] = args.p;
    if (args.which == "i") {
        const auto res = i_moments(field, args.a, args.b, args.K, args.M, args.N, args.U);
        j["i1"] = res.i1;
        j["i2"] = res.i2;
    } else if (args.which == "j") {
        const auto res = j_moments(field, args.a, args.b, args.K, args.M, args.N, args.U,
                                   args.paper_literal);
        j["j1"] = res.j1;
        j["j2"] = res.j2;
    } else if (args.which == "sigma2") {
        j["sigma2"] = sigma2_count(field, args.a, args.b, args.d, args.A, args.B, args.C,
                                   args.K, args.L, args.M, args.N, args.U, args.W);
    } else {
        fail(errc::bad_range, "--which must be i, j or sigma2");
    }
    if (args.format == "csv") {
        out.stream() << "key,value\n";
        for (const auto& [key, value] : j.items())
            out.stream() << key << ',' << value.dump() << "\n";
    } else {
        out.stream() << j.dump() << "\n";
    }
    return 0;
}

struct SearchArgs {
    std::string kind = "qrgap";
    u64 p = 11;
    u64 kmax = 10, K = 0;
    u64 mlo = 1, mhi = 1, nlo = 1, nhi = 1;
    double density = 1.0;
    u64 seed = 1;
    u64 lo = 1, hi = 3;
    bool distinct = false;
    std::string format = "records";
    std::string output;
};

std::vector<u64> window_subset(u64 lo, u64 hi, double density, Rng& rng) {
    std::vector<u64> out;
    for (u64 v = lo; v <= hi; ++v)
        if (density >= 1.0 || rng.unit_real() < density) out.push_back(v);
    if (out.empty()) out.push_back(lo);
    return out;
}

int cmd_search(const SearchArgs& args) {
    const PrimeField field(args.p);
    Output out{args.output};
    json j;
    j["kind"] = args.kind;
    j["p"] = args.p;
    Rng rng(args.seed);
    if (args.kind == "qrgap" || args.kind == "density") {
        const auto setM = window_subset(args.mlo, args.mhi, args.density, rng);
        const auto setN = window_subset(args.nlo, args.nhi, args.density, rng);
        if (args.kind == "qrgap") {
            const auto res = qr_gap_search(field, setM, setN, args.kmax);
            j["found"] = res.found;
            j["witness"] = res.witness;
            j["steps"] = res.steps;
        } else {
            const auto res = qr_triple_density(field, setM, setN, args.K ? args.K : args.kmax);
            j["count"] = res.count;
            j["density"] = res.density;
        }
    } else if (args.kind == "chen" || args.kind == "quadprime") {
        const auto res = args.kind == "chen"
                             ? chen_search(field, args.lo, args.hi, args.distinct)
                             : quad_prime_search(field, args.lo, args.hi, args.distinct);
        j["found"] = res.found;
        j["witness"] = res.witness;
        j["steps"] = res.steps;
    } else {
        fail(errc::bad_range, "--kind must be qrgap, density, chen or quadprime");
    }
    if (args.format == "csv") {
        out.stream() << "key,value\n";
        for (const auto& [key, value] : j.items())
            out.stream() << key << ',' << value.dump() << "\n";
    } else {
        out.stream() << j.dump() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"charsum: exact multilinear character sums over F_p, explicit "
                 "bound evaluation, lemma sweeps and residue searches"};
    app.set_config("--config", "", "key = value config file; command-line flags override");
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate one character sum");
    eval->add_option("kind", eval_args.kind,
                     "bi|tri|quad|fsquad|mixed-add|mixed-mul|divisor|farey|primequad");
    eval->add_option("--p", eval_args.p, "odd prime modulus")->required();
    eval->add_option("--j", eval_args.chr, "character index or 'legendre'");
    eval->add_option("--a", eval_args.a);
    eval->add_option("--b", eval_args.b);
    eval->add_option("--K", eval_args.K);
    eval->add_option("--L", eval_args.L);
    eval->add_option("--M", eval_args.M);
    eval->add_option("--N", eval_args.N);
    eval->add_option("--U", eval_args.U);
    eval->add_option("--V", eval_args.V);
    eval->add_option("--x", eval_args.x);
    eval->add_option("--R", eval_args.R);
    eval->add_option("--alpha,--weights.alpha", eval_args.alpha, "one|indicator:file=|prime|divisor|random:seed=|table:file=");
    eval->add_option("--beta,--weights.beta", eval_args.beta);
    eval->add_option("--t", eval_args.psi_t, "additive character index");
    eval->add_option("--P", eval_args.P, "numerator coefficients c0,c1,...");
    eval->add_option("--Pden", eval_args.Pden);
    eval->add_option("--Q", eval_args.Q, "rows i (X^i) of c_{i0},c_{i1},... separated by ;");
    eval->add_option("--Qden", eval_args.Qden);
    eval->add_flag("--kronecker-two", eval_args.kronecker_two,
                   "include the prime 2 via the Kronecker symbol");
    eval->add_option("--threads", eval_args.threads, "worker count (env CHARSUM_THREADS)");
    eval->add_option("--format", eval_args.format, "plain|csv|records");
    eval->add_option("--output", eval_args.output);
    eval->add_option("--r", eval_args.r, "Holder parameter for the bound columns");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "grid sweep with the full CSV bound schema");
    sweep->add_option("--grid", sweep_args.grid, "axes VAR=v1,v2,... over K,L,M,N")
        ->required()
        ->take_all();
    sweep->add_option("--kind", sweep_args.base.kind, "tri|quad");
    sweep->add_option("--p", sweep_args.base.p)->required();
    sweep->add_option("--j", sweep_args.base.chr);
    sweep->add_option("--a", sweep_args.base.a);
    sweep->add_option("--b", sweep_args.base.b);
    sweep->add_option("--r", sweep_args.base.r);
    sweep->add_option("--alpha,--weights.alpha", sweep_args.base.alpha);
    sweep->add_option("--beta,--weights.beta", sweep_args.base.beta);
    sweep->add_option("--threads", sweep_args.base.threads);
    sweep->add_option("--format", sweep_args.base.format)->default_val("csv");
    sweep->add_option("--output", sweep_args.base.output);

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "evaluate the explicit bound formulas");
    bound->add_option("--p", bound_args.p)->required();
    bound->add_option("--r", bound_args.r);
    bound->add_option("--a", bound_args.a);
    bound->add_option("--b", bound_args.b);
    bound->add_option("--K", bound_args.K);
    bound->add_option("--L", bound_args.L);
    bound->add_option("--M", bound_args.M);
    bound->add_option("--N", bound_args.N);
    bound->add_option("--x", bound_args.x);
    bound->add_option("--eta", bound_args.eta);
    bound->add_option("--norm1-alpha", bound_args.norm1_alpha);
    bound->add_option("--norm2-alpha", bound_args.norm2_alpha);
    bound->add_option("--norminf-alpha", bound_args.normInf_alpha);
    bound->add_option("--norm2-beta", bound_args.norm2_beta);
    bound->add_option("--norminf-beta", bound_args.normInf_beta);
    bound->add_option("--norminf-gamma", bound_args.normInf_gamma);
    bound->add_option("--format", bound_args.format);
    bound->add_option("--output", bound_args.output);

    MomentsArgs moments_args;
    auto* moments = app.add_subcommand("moments", "lemma verification sweeps (exit 1 on violation)");
    moments->add_option("--pmax", moments_args.pmax);
    moments->add_option("--trials", moments_args.trials);
    moments->add_option("--seed", moments_args.seed);
    moments->add_flag("--double", moments_args.doubled, "also sweep the two-character moment");
    moments->add_option("--pmax-double", moments_args.pmax_double);
    moments->add_option("--format", moments_args.format);
    moments->add_option("--output", moments_args.output);

    GcdArgs gcd_args;
    auto* gcdsum = app.add_subcommand("gcdsum", "exact gcd-sum oracle");
    gcdsum->add_option("--a", gcd_args.a);
    gcdsum->add_option("--b", gcd_args.b);
    gcdsum->add_option("--A", gcd_args.A);
    gcdsum->add_option("--B", gcd_args.B);
    gcdsum->add_option("--K", gcd_args.K);
    gcdsum->add_option("--L", gcd_args.L);
    gcdsum->add_option("--M", gcd_args.M);
    gcdsum->add_option("--N", gcd_args.N);
    gcdsum->add_option("--U", gcd_args.U);
    gcdsum->add_option("--W", gcd_args.W);
    gcdsum->add_option("--format", gcd_args.format);
    gcdsum->add_option("--output", gcd_args.output);

    CountsArgs counts_args;
    auto* counts = app.add_subcommand("counts", "tuple-counting oracles (I, J, Sigma2)");
    counts->add_option("--which", counts_args.which, "i|j|sigma2");
    counts->add_option("--p", counts_args.p)->required();
    counts->add_option("--a", counts_args.a);
    counts->add_option("--b", counts_args.b);
    counts->add_option("--d", counts_args.d);
    counts->add_option("--A", counts_args.A);
    counts->add_option("--B", counts_args.B);
    counts->add_option("--C", counts_args.C);
    counts->add_option("--K", counts_args.K);
    counts->add_option("--L", counts_args.L);
    counts->add_option("--M", counts_args.M);
    counts->add_option("--N", counts_args.N);
    counts->add_option("--U", counts_args.U);
    counts->add_option("--W", counts_args.W);
    counts->add_flag("--paper-literal", counts_args.paper_literal,
                     "uncorrected J-count variant: keep m1 in the second congruence");
    counts->add_option("--format", counts_args.format);
    counts->add_option("--output", counts_args.output);

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "QR-gap, density and prime-tuple searches");
    search->add_option("--kind", search_args.kind, "qrgap|density|chen|quadprime");
    search->add_option("--p", search_args.p)->required();
    search->add_option("--kmax", search_args.kmax);
    search->add_option("--K", search_args.K);
    search->add_option("--mlo", search_args.mlo);
    search->add_option("--mhi", search_args.mhi);
    search->add_option("--nlo", search_args.nlo);
    search->add_option("--nhi", search_args.nhi);
    search->add_option("--density", search_args.density);
    search->add_option("--seed", search_args.seed);
    search->add_option("--lo", search_args.lo);
    search->add_option("--hi", search_args.hi);
    search->add_flag("--distinct", search_args.distinct);
    search->add_option("--format", search_args.format);
    search->add_option("--output", search_args.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (eval->parsed()) return cmd_eval(eval_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (bound->parsed()) return cmd_bound(bound_args);
        if (moments->parsed()) return cmd_moments(moments_args);
        if (gcdsum->parsed()) return cmd_gcdsum(gcd_args);
        if (counts->parsed()) return cmd_counts(counts_args);
        if (search->parsed()) return cmd_search(search_args);
    } catch (const error& e) {
        std::cerr << "charsum: " << e.what() << "\n";
        return e.code() == errc::too_large ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "charsum: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
