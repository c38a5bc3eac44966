#include "ffnt/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ffnt/error.hpp"
#include "ffnt/experiments.hpp"
#include "ffnt/residues.hpp"

namespace ffnt {

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    try {
        while (std::getline(ss, tok, ',')) {
            auto dots = tok.find("..");
            if (dots == std::string::npos) {
                out.push_back(std::stoi(tok));
                continue;
            }
            int lo = std::stoi(tok.substr(0, dots)), hi = std::stoi(tok.substr(dots + 2));
            if (hi < lo) throw Error(ErrorCode::UsageError, "empty range '" + tok + "'");
            for (int i = lo; i <= hi; ++i) out.push_back(i);
        }
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::UsageError, "bad integer list '" + s + "'");
    }
    if (out.empty()) throw Error(ErrorCode::UsageError, "empty integer list");
    return out;
}

namespace {

// largest m with q^m <= X
int exponent_of(uint64_t X, uint64_t q) {
    if (X < 1) throw Error(ErrorCode::UsageError, "X must be at least 1");
    int m = 0;
    for (unsigned __int128 v = q; v <= X; v *= q) ++m;
    return m;
}

uint64_t parse_power(const std::string& tok) {
    auto caret = tok.find('^');
    if (caret == std::string::npos) return std::stoull(tok);
    uint64_t b = std::stoull(tok.substr(0, caret));
    int e = std::stoi(tok.substr(caret + 1));
    unsigned __int128 v = 1;
    for (int i = 0; i < e; ++i) {
        v *= b;
        if (v > UINT64_MAX) throw Error(ErrorCode::UsageError, "X too large: " + tok);
    }
    return static_cast<uint64_t>(v);
}

}  // namespace

std::vector<int> parse_X_list(const std::string& s, uint64_t q) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    try {
        while (std::getline(ss, tok, ',')) {
            auto dots = tok.find("..");
            if (dots == std::string::npos) {
                out.push_back(exponent_of(parse_power(tok), q));
                continue;
            }
            int lo = exponent_of(parse_power(tok.substr(0, dots)), q);
            int hi = exponent_of(parse_power(tok.substr(dots + 2)), q);
            for (int m = lo; m <= hi; ++m) out.push_back(m);
        }
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::UsageError, "bad X list '" + s + "'");
    }
    if (out.empty()) throw Error(ErrorCode::UsageError, "empty X list");
    return out;
}

namespace {

struct Flags {
    std::string field = "3";
    std::string D, F, r, h;
    std::string d, X, mode, spec;
    int n = -1, cutoff = 12, max_degA = 4;
    int threads = 0;
    uint64_t seed = 1;
    std::string format = "csv", out;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--field", f.field, "field as p^k/modulus");
    sub->add_option("--threads", f.threads, "worker threads (default: logical cores)");
    sub->add_option("--seed", f.seed, "seed for sampled oracle checks");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", f.out, "report path (default: standard output)");
}

RunOptions options(const Flags& f) {
    RunOptions o;
    o.threads = f.threads > 0 ? f.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    o.seed = f.seed;
    return o;
}

Poly need_poly(const Field* K, const std::string& s, const char* name) {
    if (s.empty()) throw Error(ErrorCode::UsageError, std::string("--") + name + " is required");
    return Poly::parse(K, s);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::UsageError, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TraceSpec load_spec(const Field* K, const std::string& path) {
    if (path.empty()) return TraceSpec::trivial(K);
    try {
        return TraceSpec::from_json(K, nlohmann::json::parse(read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("spec: ") + e.what());
    }
}

BoundMode bound_mode(const std::string& m) {
    if (m == "short" || m.empty()) return BoundMode::Short;
    if (m == "complete") return BoundMode::Complete;
    if (m == "polya_vinogradov") return BoundMode::PolyaVinogradov;
    throw Error(ErrorCode::UsageError, "unknown mode '" + m + "'");
}

// ---------------------------------------------------------------- selftest

Report selftest() {
    Report rep;
    rep.experiment = "selftest";
    rep.columns = {"check", "cases", "ok"};
    auto row = [&](const std::string& name, int64_t cases, bool ok) {
        rep.add_row({name, std::to_string(cases), ok ? "1" : "0"});
        rep.ok &= ok;
    };
    const Field* F3 = Field::prime(3);
    Poly u = Poly::x(F3);

    int64_t n = 0;
    bool ok = true;
    for (int d = 0; d <= 4; ++d)
        for (uint64_t i = 0; i < count_pow(3, d + 1); ++i) {
            Poly f = poly_from_index(F3, i, d + 1);
            if (f.deg() != d) continue;
            ++n;
            ok &= pellet_moebius(f) == moebius(f);
        }
    row("pellet_moebius", n, ok);

    n = 0;
    ok = true;
    for (int dm = 1; dm <= 3; ++dm)
        for (const auto& M : monic_polys(F3, dm)) {
            if (moebius(M) == 0) continue;
            for (uint64_t i = 0; i < 27; ++i) {
                Poly f = poly_from_index(F3, i, 3);
                ++n;
                ok &= jacobi(f, M) == jacobi_squarefree(f, M);
            }
        }
    row("jacobi_norm", n, ok);

    n = 0;
    ok = true;
    for (int d = 1; d <= 3; ++d)
        for (const auto& pi : monic_irreducibles(F3, d))
            for (int k = d; k <= 6; ++k, ++n) ok &= mobius_progression_sum(pi, k) == mobius_progression_formula(pi, k);
    row("mobius_progression", n, ok);

    RunOptions one;
    Report ch = chowla_scan(BiPoly::parse(F3, "0,1;0;1"), {1}, one);
    row("chowla_X3", 9, ch.ok && ch.rows[0][3] == "-3");
    Report bh = bateman_horn_scan(u, {1, 2}, one);
    row("bateman_horn_d1", 3, bh.ok && bh.rows[0][1] == "3");

    Report bj = bijection_report(u, FormClass::Definite, 3);
    row("definite_bijection", static_cast<int64_t>(bj.rows.size()), bj.ok);

    Report mf = mobius_formula_report(BiPoly::parse(F3, "1,1;0,0,1;1"), Poly::parse(F3, "0,1,0,0,1"), 6);
    row("mobius_formula", std::stoll(mf.rows[0][1]), mf.ok);

    n = 0;
    ok = true;
    TraceSpec t = TraceSpec::make(F3, {make_local(Poly::parse(F3, "1,0,1"), {LocalFactor::dirichlet(u, Poly::one(F3))}),
                                       make_local(u, {LocalFactor::kloosterman(Poly::one(F3))})});
    TraceSpec te = TraceSpec::make(F3, t.locals, Poly::parse(F3, "2,0,1"));
    for (uint64_t i = 0; i < 81; ++i, ++n) {
        Poly x = poly_from_index(F3, i, 4);
        ok &= eval(te, x) == eval(t, *te.er + pow(x, 3));
    }
    row("er_pullback", n, ok);

    Report kl = kloosterman_twisted_scan(Poly::one(F3), Poly(F3), u, Poly::one(F3), 1, 2, one);
    Report back = Report::parse(kl.to_csv());
    row("kloosterman_crosscheck", kl.meta["crosschecks"].get<int64_t>(), kl.ok);
    row("report_round_trip", 2, back.to_json() == kl.to_json() && Report::parse(kl.render("json")).to_json() == kl.to_json());
    return rep;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Function-field Mobius, prime and trace-sum experiments"};
    app.name("ffnt_cli");
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with flag values (flags on the command line win)");
    Flags f;

    auto* chowla = app.add_subcommand("chowla", "sum of mu(F(f)) over |f| <= X");
    chowla->add_option("--F", f.F, "F(u,T) as ';'-separated u-coefficient rows per T-power")->default_str("0,1;0;1");
    chowla->add_option("--X", f.X, "X values: 3, 3^4, 3^1..3^12")->required();

    auto* bh = app.add_subcommand("bateman-horn", "sum of Lambda(f^2 + D) over monic f of degree d");
    bh->add_option("--D", f.D, "D(u)")->required();
    bh->add_option("--d", f.d, "degrees: 1..12 or 1,2,3")->required();
    bh->add_option("--cutoff", f.cutoff, "Euler-product cutoff for the singular series");

    auto* ss = app.add_subcommand("singular-series", "singular series of T^2 + D, or a convergence table with --n");
    ss->add_option("--D", f.D, "D(u)")->required();
    ss->add_option("--cutoff", f.cutoff, "Euler-product cutoff");
    ss->add_option("--n", f.n, "largest n of the partial-sum convergence table");

    auto* qa = app.add_subcommand("qform-audit", "bijection between solutions and standard representations");
    qa->add_option("--D", f.D, "D(u)")->required();
    qa->add_option("--mode", f.mode, "definite or indefinite")->check(CLI::IsMember({"definite", "indefinite"}));
    qa->add_option("--max-degA", f.max_degA, "largest deg A audited");

    auto* ts = app.add_subcommand("trace-sum", "trace-function sums: bound audits, or the t_{F,r} identity with --F");
    ts->add_option("--spec", f.spec, "trace spec JSON file (default: trivial)");
    ts->add_option("--mode", f.mode, "short, complete or polya_vinogradov");
    ts->add_option("--d", f.d, "sum lengths n for the bound audit");
    ts->add_option("--h", f.h, "twist h for complete sums");
    ts->add_option("--F", f.F, "F(u,T) for the t_{F,r} identity");
    ts->add_option("--r", f.r, "r(u) for the t_{F,r} identity");
    ts->add_option("--n", f.n, "interval dimension for the t_{F,r} identity");

    auto* mv = app.add_subcommand("mobius-formula-verify", "check the Mobius formula on r + s^p");
    mv->add_option("--F", f.F, "F(u,T)")->required();
    mv->add_option("--r", f.r, "r(u)")->required();
    mv->add_option("--n", f.n, "interval dimension")->required();

    auto* ks = app.add_subcommand("kloosterman-scan", "Kloosterman-twisted Mobius sums of a x^2 + b x y + c y^2");
    ks->add_option("--F", f.F, "the form at y = 1 as 'c;b;a'")->required();
    ks->add_option("--h", f.h, "h(u)")->default_str("1");
    ks->add_option("--n", f.n, "largest deg y")->required();
    ks->add_option("--d", f.d, "x-range: deg x < d")->required();

    auto* st = app.add_subcommand("selftest", "exhaustive small-case invariants");

    for (auto* sub : {chowla, bh, ss, qa, ts, mv, ks, st}) add_common(sub, f);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        const Field* K = Field::parse(f.field);
        RunOptions opt = options(f);
        Report rep;
        if (chowla->parsed()) {
            BiPoly F = BiPoly::parse(K, f.F.empty() ? "0,1;0;1" : f.F);
            rep = chowla_scan(F, parse_X_list(f.X, K->q()), opt);
        } else if (bh->parsed()) {
            rep = bateman_horn_scan(need_poly(K, f.D, "D"), parse_int_list(f.d), opt, f.cutoff);
        } else if (ss->parsed()) {
            Poly D = need_poly(K, f.D, "D");
            rep = f.n >= 0 ? convergence_audit(D, f.n, std::min(4, std::max(f.n, 1))) : singular_series_report(D, f.cutoff);
        } else if (qa->parsed()) {
            FormClass mode = f.mode == "indefinite" ? FormClass::Indefinite : FormClass::Definite;
            rep = bijection_report(need_poly(K, f.D, "D"), mode, f.max_degA);
        } else if (ts->parsed()) {
            TraceSpec base = load_spec(K, f.spec);
            if (!f.F.empty()) {
                if (f.n < 0) throw Error(ErrorCode::UsageError, "--n is required with --F");
                rep = trace_sum_identity_report(BiPoly::parse(K, f.F), need_poly(K, f.r, "r"), f.n, base);
            } else {
                if (f.spec.empty()) throw Error(ErrorCode::UsageError, "--spec or --F is required");
                Poly h = f.h.empty() ? Poly::one(K) : Poly::parse(K, f.h);
                rep = trace_bound_report(base, bound_mode(f.mode), parse_int_list(f.d.empty() ? "0" : f.d), h);
            }
        } else if (mv->parsed()) {
            rep = mobius_formula_report(BiPoly::parse(K, f.F), need_poly(K, f.r, "r"), f.n);
        } else if (ks->parsed()) {
            BiPoly form = BiPoly::parse(K, f.F);
            if (form.deg_T() > 2) throw Error(ErrorCode::UsageError, "--F must have degree <= 2 in T");
            auto ds = parse_int_list(f.d);
            if (ds.size() != 1) throw Error(ErrorCode::UsageError, "--d takes a single x-range degree");
            rep = kloosterman_twisted_scan(form.coeff(2), form.coeff(1), form.coeff(0),
                                           Poly::parse(K, f.h.empty() ? "1" : f.h), f.n, ds[0], opt);
        } else if (st->parsed()) {
            rep = selftest();
        }
        std::string text = rep.render(f.format);
        if (f.out.empty()) {
            out << text;
        } else {
            std::ofstream o(f.out);
            if (!o) throw Error(ErrorCode::UsageError, "cannot write " + f.out);
            o << text;
        }
        if (!rep.ok) {
            err << "audit failure in " << rep.experiment << "\n";
            return 1;
        }
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.code == ErrorCode::AuditFailure || e.code == ErrorCode::Internal ? 1 : 2;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace ffnt
