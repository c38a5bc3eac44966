#include "ffnt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "ffnt/error.hpp"
#include "ffnt/qcong.hpp"
#include "ffnt/residues.hpp"

namespace ffnt {

// ---------------------------------------------------------------- reports

std::string fmt_float(long double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15Lg", x);
    return buf;
}

std::string fmt_int(__int128 x) { return int128_str(x); }

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw Error(ErrorCode::ParseError, "unterminated quote in CSV");
    out.push_back(cur);
    return out;
}

}  // namespace

void Report::add_row(std::vector<std::string> r) {
    if (r.size() != columns.size()) throw Error(ErrorCode::Internal, "row width mismatch in " + experiment);
    rows.push_back(std::move(r));
}

std::string Report::to_csv() const {
    std::string s = "# experiment: " + experiment + "\n";
    s += "# config: " + config.dump() + "\n";
    s += "# meta: " + meta.dump() + "\n";
    s += std::string("# ok: ") + (ok ? "true" : "false") + "\n";
    for (size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + csv_cell(columns[i]);
    s += "\n";
    for (const auto& r : rows) {
        for (size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + csv_cell(r[i]);
        s += "\n";
    }
    return s;
}

nlohmann::json Report::to_json() const {
    return {{"experiment", experiment}, {"config", config}, {"columns", columns},
            {"rows", rows},             {"meta", meta},     {"ok", ok}};
}

std::string Report::render(const std::string& format) const {
    if (format == "csv") return to_csv();
    if (format == "json") return to_json().dump(2) + "\n";
    throw Error(ErrorCode::UsageError, "unknown format '" + format + "'");
}

Report Report::parse_csv(const std::string& text) {
    Report r;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    auto tag = [&](const std::string& key) -> std::optional<std::string> {
        std::string pre = "# " + key + ": ";
        if (line.rfind(pre, 0) == 0) return line.substr(pre.size());
        return std::nullopt;
    };
    try {
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] == '#') {
                if (auto v = tag("experiment")) r.experiment = *v;
                else if (auto v = tag("config")) r.config = nlohmann::json::parse(*v);
                else if (auto v = tag("meta")) r.meta = nlohmann::json::parse(*v);
                else if (auto v = tag("ok")) r.ok = *v == "true";
                continue;
            }
            if (!header) {
                r.columns = csv_split(line);
                header = true;
            } else {
                r.add_row(csv_split(line));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
    }
    if (!header) throw Error(ErrorCode::ParseError, "CSV report without a header row");
    return r;
}

Report Report::from_json(const nlohmann::json& j) {
    try {
        Report r;
        r.experiment = j.at("experiment").get<std::string>();
        r.config = j.at("config");
        r.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& row : j.at("rows")) r.add_row(row.get<std::vector<std::string>>());
        r.meta = j.at("meta");
        r.ok = j.at("ok").get<bool>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
    }
}

Report Report::parse(const std::string& text) {
    size_t i = text.find_first_not_of(" \t\r\n");
    if (i != std::string::npos && text[i] == '{') {
        try {
            return from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
        }
    }
    return parse_csv(text);
}

// ---------------------------------------------------------------- scheduling

void run_blocks(uint64_t n, uint64_t block, int threads, const std::function<void(uint64_t, uint64_t, uint64_t)>& fn) {
    if (block == 0) block = 1;
    uint64_t nb = (n + block - 1) / block;
    std::atomic<uint64_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            uint64_t b = next++;
            if (b >= nb) return;
            try {
                fn(b, b * block, std::min(n, (b + 1) * block));
            } catch (...) {
                std::lock_guard lock(mu);
                if (!err) err = std::current_exception();
                next = nb;
            }
        }
    };
    int t = std::max(1, std::min<int>(threads, static_cast<int>(std::max<uint64_t>(nb, 1))));
    if (t == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < t; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
}

namespace {

uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

bool sampled(uint64_t seed, uint64_t salt, uint64_t i, uint64_t rate) {
    return splitmix(seed * 0x100000001b3ull ^ salt ^ splitmix(i)) % rate == 0;
}

void check_cap(uint64_t work, const RunOptions& opt) {
    if (work > opt.cap)
        throw Error(ErrorCode::UsageError,
                    "enumeration of " + std::to_string(work) + " evaluations exceeds the cap " + std::to_string(opt.cap));
}

uint64_t pow_checked(uint64_t q, int n) {
    long double approx = std::pow(static_cast<long double>(q), n);
    if (approx > 1.8e19L) throw Error(ErrorCode::UsageError, "enumeration size overflows");
    return count_pow(q, n);
}

}  // namespace

// ---------------------------------------------------------------- prime-field mu

PrimeMu::PrimeMu(uint64_t p) : p_(static_cast<uint32_t>(p)) {
    if (p < 3 || p > 65536) throw Error(ErrorCode::UsageError, "PrimeMu needs an odd prime below 2^16");
    if (p <= 256) {
        tab_.resize(p * p);
        for (uint32_t a = 0; a < p; ++a)
            for (uint32_t b = 0; b < p; ++b) tab_[a * p + b] = a * b % p_;
    }
    inv_.assign(p, 0);
    chi_.assign(p, -1);
    chi_[0] = 0;
    for (uint32_t a = 1; a < p; ++a) {
        chi_[static_cast<uint64_t>(a) * a % p] = 1;
        uint32_t r = 1, b = a;
        for (uint64_t e = p - 2; e; e >>= 1) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
        }
        inv_[a] = r;
    }
}

uint32_t PrimeMu::resultant(uint32_t* A, int m, uint32_t* B, int n) const {
    auto powp = [&](uint32_t b, int e) {
        uint32_t r = 1;
        for (; e > 0; e >>= 1) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
        }
        return r;
    };
    uint32_t res = 1;
    for (;;) {
        if (n == 0) return mul(res, powp(B[0], m));
        uint32_t ilc = inv_[B[n]];
        for (int i = m; i >= n; --i) {
            uint32_t c = mul(A[i], ilc);
            if (c == 0) continue;
            uint32_t* a = A + (i - n);
            for (int j = 0; j <= n; ++j) {
                uint32_t t = mul(c, B[j]);
                a[j] = a[j] >= t ? a[j] - t : a[j] + p_ - t;
            }
        }
        int r = n - 1;
        while (r >= 0 && A[r] == 0) --r;
        if (r < 0) return 0;
        if ((m & 1) && (n & 1) && res) res = p_ - res;
        res = mul(res, powp(B[n], m - r));
        std::swap(A, B);
        m = n;
        n = r;
    }
}

int PrimeMu::mu(uint32_t* g, int n) const {
    while (n >= 0 && g[n] == 0) --n;
    if (n < 0) return 0;
    if (n == 0) return 1;
    thread_local std::vector<uint32_t> d;
    d.assign(n, 0);
    for (int i = 0; i < n; ++i) d[i] = mul(static_cast<uint32_t>((i + 1) % p_), g[i + 1]);
    int k = n - 1;
    while (k >= 0 && d[k] == 0) --k;
    if (k < 0) return 0;
    uint32_t lc = g[n];
    uint32_t res = resultant(g, n, d.data(), k);
    if (res == 0) return 0;
    for (int i = 0; i < n - 1 - k; ++i) res = mul(res, lc);
    uint32_t disc = mul(res, inv_[lc]);
    if ((static_cast<int64_t>(n) * (n - 1) / 2) % 2) disc = p_ - disc;
    int c = chi_[disc];
    return n % 2 ? -c : c;
}

int PrimeMu::mu(const Poly& f) const {
    std::vector<uint32_t> g(f.coeffs().begin(), f.coeffs().end());
    return mu(g.data(), static_cast<int>(g.size()) - 1);
}

// ---------------------------------------------------------------- Chowla

Report chowla_scan(const BiPoly& F, const std::vector<int>& ms, const RunOptions& opt) {
    if (F.deg_T() < 1) throw Error(ErrorCode::DegreeContractViolated, "F must have positive degree in T");
    if (!is_separable_T(F)) throw Error(ErrorCode::Inseparable, "F is a polynomial in T^p");
    if (ms.empty()) throw Error(ErrorCode::UsageError, "no X values");
    for (int m : ms)
        if (m < 0) throw Error(ErrorCode::UsageError, "X must be at least 1");
    const Field* K = F.field();
    const uint64_t q = K->q();
    const int M = *std::max_element(ms.begin(), ms.end());
    const uint64_t N = pow_checked(q, M + 1);
    check_cap(N, opt);

    const bool prime = K->is_prime_field();
    std::optional<PrimeMu> pm;
    if (prime) pm.emplace(q);
    const int k = F.deg_T();
    std::vector<std::vector<uint32_t>> a(k + 1);
    for (int i = 0; i <= k; ++i) a[i].assign(F.coeff(i).coeffs().begin(), F.coeff(i).coeffs().end());
    const uint64_t rate = 4096;

    struct Acc {
        std::vector<int64_t> by_deg;  // index deg f + 1
        int64_t zeros = 0, oracle = 0, mismatches = 0;
    };
    const uint64_t block = 1 << 14;
    std::vector<Acc> accs((N + block - 1) / block);
    run_blocks(N, block, opt.threads, [&](uint64_t b, uint64_t lo, uint64_t hi) {
        Acc acc;
        acc.by_deg.assign(M + 2, 0);
        std::vector<uint32_t> f(M + 1, 0), g, tmp;
        uint64_t x = lo;
        for (int i = 0; i <= M; ++i, x /= q) f[i] = static_cast<uint32_t>(x % q);
        for (uint64_t idx = lo; idx < hi; ++idx) {
            int df = M;
            while (df >= 0 && f[df] == 0) --df;
            int mu;
            if (prime) {
                g = a[k];
                for (int i = k - 1; i >= 0; --i) {
                    size_t len = g.empty() || df < 0 ? 0 : g.size() + df;
                    tmp.assign(std::max(len, a[i].size()), 0);
                    if (len)
                        for (size_t s = 0; s < g.size(); ++s) {
                            if (!g[s]) continue;
                            for (int t = 0; t <= df; ++t) {
                                uint32_t v = tmp[s + t] + static_cast<uint32_t>(uint64_t{g[s]} * f[t] % q);
                                tmp[s + t] = v >= q ? v - static_cast<uint32_t>(q) : v;
                            }
                        }
                    for (size_t s = 0; s < a[i].size(); ++s) {
                        uint32_t v = tmp[s] + a[i][s];
                        tmp[s] = v >= q ? v - static_cast<uint32_t>(q) : v;
                    }
                    g.swap(tmp);
                }
                bool zero = std::all_of(g.begin(), g.end(), [](uint32_t c) { return c == 0; });
                if (zero) ++acc.zeros;
                mu = zero ? 0 : pm->mu(g.data(), static_cast<int>(g.size()) - 1);
            } else {
                Poly val = F.eval_T(poly_from_index(K, idx, M + 1));
                if (val.is_zero()) ++acc.zeros;
                mu = val.is_zero() ? 0 : pellet_moebius(val);
            }
            if (sampled(opt.seed, 0xc0, idx, rate)) {
                Poly val = F.eval_T(poly_from_index(K, idx, M + 1));
                ++acc.oracle;
                if ((val.is_zero() ? 0 : moebius(val)) != mu) ++acc.mismatches;
            }
            acc.by_deg[df + 1] += mu;
            for (int i = 0; i <= M; ++i) {
                if (++f[i] < q) break;
                f[i] = 0;
            }
        }
        accs[b] = std::move(acc);
    });

    std::vector<int64_t> by_deg(M + 2, 0);
    int64_t zeros = 0, oracle = 0, mismatches = 0;
    for (const auto& acc : accs) {
        for (int i = 0; i <= M + 1; ++i) by_deg[i] += acc.by_deg[i];
        zeros += acc.zeros;
        oracle += acc.oracle;
        mismatches += acc.mismatches;
    }

    Report r;
    r.experiment = "chowla";
    r.config = {{"field", K->spec()}, {"F", F.to_string()}, {"X_exponents", ms}, {"seed", opt.seed}};
    r.columns = {"m", "X", "count", "sum", "ratio", "exponent"};
    std::vector<int> sorted = ms;
    std::sort(sorted.begin(), sorted.end());
    for (int m : sorted) {
        int64_t S = 0;
        for (int i = 0; i <= m + 1; ++i) S += by_deg[i];
        long double X = std::pow(static_cast<long double>(q), m);
        long double expo = S == 0 ? -INFINITY : (m == 0 ? NAN : std::log(std::fabs(static_cast<long double>(S))) / std::log(X));
        r.add_row({std::to_string(m), fmt_int(static_cast<__int128>(count_pow(q, m))),
                   fmt_int(static_cast<__int128>(count_pow(q, m + 1))), std::to_string(S),
                   fmt_float(static_cast<long double>(S) / X), fmt_float(expo)});
    }
    r.meta = {{"zero_values", zeros}, {"oracle_checked", oracle}, {"oracle_mismatches", mismatches}};
    r.ok = mismatches == 0;
    return r;
}

// ---------------------------------------------------------------- Bateman-Horn

Report bateman_horn_scan(const Poly& D, const std::vector<int>& ds, const RunOptions& opt, int cutoff) {
    QuadTarget tgt = QuadTarget::make(D);
    if (!tgt.irreducible) throw Error(ErrorCode::ReducibleF, "T^2 + D is reducible");
    if (ds.empty()) throw Error(ErrorCode::UsageError, "no degrees");
    const Field* K = D.field();
    const uint64_t q = K->q();
    uint64_t work = 0;
    for (int d : ds) {
        if (d < 1) throw Error(ErrorCode::UsageError, "degrees must be >= 1");
        work += pow_checked(q, d);
    }
    check_cap(work, opt);
    long double S = singular_series(D, cutoff).value;

    Report r;
    r.experiment = "bateman-horn";
    r.config = {{"field", K->spec()}, {"D", D.to_string()}, {"d", ds}, {"cutoff", cutoff}, {"seed", opt.seed}};
    r.columns = {"d", "sum", "main_term", "rel_error", "oracle_checked"};
    int64_t mismatches = 0;
    for (int d : ds) {
        const uint64_t N = count_pow(q, d);
        const uint64_t block = 1 << 12;
        struct Acc {
            int64_t sum = 0, oracle = 0, bad = 0;
        };
        std::vector<Acc> accs((N + block - 1) / block);
        Poly top = Poly::monomial(K, 1, d);
        run_blocks(N, block, opt.threads, [&](uint64_t b, uint64_t lo, uint64_t hi) {
            Acc acc;
            for (uint64_t i = lo; i < hi; ++i) {
                Poly f = top + poly_from_index(K, i, d);
                Poly g = f * f + D;
                int lam = von_mangoldt_fast(g);
                acc.sum += lam;
                if (sampled(opt.seed, static_cast<uint64_t>(d), i, 100)) {
                    ++acc.oracle;
                    if (von_mangoldt(g) != lam || von_mangoldt_convolution(g) != lam) ++acc.bad;
                }
            }
            accs[b] = acc;
        });
        Acc tot;
        for (const auto& a : accs) {
            tot.sum += a.sum;
            tot.oracle += a.oracle;
            tot.bad += a.bad;
        }
        mismatches += tot.bad;
        long double main = S * std::pow(static_cast<long double>(q), d);
        r.add_row({std::to_string(d), std::to_string(tot.sum), fmt_float(main),
                   fmt_float(std::fabs(static_cast<long double>(tot.sum) - main) / main), std::to_string(tot.oracle)});
    }
    r.meta = {{"singular_series", fmt_float(S)}, {"oracle_mismatches", mismatches}};
    r.ok = mismatches == 0;
    return r;
}

// ---------------------------------------------------------------- Kloosterman-twisted sums

Report kloosterman_twisted_scan(const Poly& a, const Poly& b, const Poly& c, const Poly& h, int n, int m,
                                const RunOptions& opt) {
    const Field* K = a.field() ? a.field() : b.field();
    if (!K) K = c.field();
    if (!K) throw Error(ErrorCode::UsageError, "a, b, c need a field");
    if ((b * b - (a * c).scaled(K->from_int(4))).is_zero())
        throw Error(ErrorCode::DegenerateDiscriminant, "b^2 - 4ac = 0");
    if (n < 0 || m < 0) throw Error(ErrorCode::UsageError, "n and m must be nonnegative");
    const uint64_t q = K->q(), p = K->p();
    const uint64_t ny = pow_checked(q, n + 1), nx = pow_checked(q, m);
    check_cap(ny * nx, opt);
    std::optional<PrimeMu> pm;
    if (K->is_prime_field()) pm.emplace(q);
    auto mu_of = [&](const Poly& v) {
        if (v.is_zero()) return 0;
        return pm ? pm->mu(v) : pellet_moebius(v);
    };

    struct Row {
        std::vector<std::string> cells;
        long double abs = 0;
        int64_t checks = 0, bad = 0;
    };
    std::vector<Row> rows(ny);
    const uint64_t block = 8;
    run_blocks(ny, block, opt.threads, [&](uint64_t, uint64_t lo, uint64_t hi) {
        for (uint64_t iy = std::max<uint64_t>(lo, 1); iy < hi; ++iy) {
            Poly y = poly_from_index(K, iy, n + 1);
            bool prime = y.deg() >= 1 && is_irreducible(y);
            CycloSum inner(p);
            std::optional<TraceSpec> tk;
            CycloSum via_trace(p), kl(p);
            Elem lam = y.lead();
            if (prime && m >= y.deg())
                tk = TraceSpec::make(K, {make_local(y, {LocalFactor::kloosterman(h.scaled(K->inv(lam)))})});
            for (uint64_t ix = 0; ix < nx; ++ix) {
                Poly x = poly_from_index(K, ix, m);
                if (!gcd(x, y).is_constant()) continue;
                uint64_t j = 0;
                Poly xbar(K);
                if (y.deg() >= 1) {
                    xbar = inv_mod(x, y);
                    j = exp_inf(h * xbar, y);
                }
                int mu = mu_of(a * x * x + b * x * y + c * y * y);
                if (mu) inner.add_root(j, mu);
                if (tk) {
                    if (mu) via_trace += eval(*tk, x).times_int(mu);
                    kl.add_root(exp_inf(h * xbar + x, y));
                }
            }
            Row row;
            row.abs = inner.abs();
            std::string ks, kr;
            if (tk) {
                row.checks = 2;
                if (!(via_trace == inner)) ++row.bad;
                CycloSum ct = complete_sum(*tk, Poly::constant(K, K->inv(lam)), m);
                if (!(ct == kl)) ++row.bad;
                ks = fmt_float(kl.abs());
                long double bound = 2.0L * std::pow(static_cast<long double>(q), m) /
                                    std::sqrt(std::pow(static_cast<long double>(q), y.deg()));
                kr = fmt_float(kl.abs() / bound);
            }
            row.cells = {y.to_string(),     std::to_string(y.deg()), prime ? "1" : "0",
                         inner.to_json().dump(), fmt_float(row.abs), ks, kr};
            rows[iy] = std::move(row);
        }
    });

    Report r;
    r.experiment = "kloosterman";
    r.config = {{"field", K->spec()}, {"a", a.to_string()}, {"b", b.to_string()}, {"c", c.to_string()},
                {"h", h.to_string()}, {"n", n},                {"m", m},            {"seed", opt.seed}};
    r.columns = {"y", "deg_y", "prime", "inner_sum", "abs_inner", "kloosterman_abs", "kloosterman_ratio"};
    long double total = 0;
    int64_t checks = 0, bad = 0;
    for (uint64_t iy = 1; iy < ny; ++iy) {
        total += rows[iy].abs;
        checks += rows[iy].checks;
        bad += rows[iy].bad;
        r.add_row(std::move(rows[iy].cells));
    }
    // context only: the implied constants are ineffective
    int c1 = std::max({a.deg(), b.deg() + n, c.deg() + 2 * n, 0});
    long double lq = std::log(static_cast<long double>(q));
    long double gamma = 1, beta = (1 + 2 * gamma) * (1 + 2 * gamma);
    long double alpha_max = std::min(0.5L - 10 * std::log(1 + 2 * gamma) / lq + std::log(1 + 3 * gamma) / lq,
                                     0.5L / p + std::log(gamma) / lq / p - 2 * std::log(1 + 2 * gamma) / lq);
    long double shape = std::pow(static_cast<long double>(q), n + m) * std::pow(beta, 2 * c1) *
                        (std::pow(beta, -m) + 1) * std::pow(1 + 3 * gamma, n);
    r.meta = {{"total", fmt_float(total)},
              {"c1", c1},
              {"c2", 0},
              {"c3", m},
              {"gamma", fmt_float(gamma)},
              {"alpha_upper", fmt_float(alpha_max)},
              {"bound_shape_alpha0", fmt_float(shape)},
              {"crosschecks", checks},
              {"crosscheck_mismatches", bad}};
    r.ok = bad == 0;
    return r;
}

// ---------------------------------------------------------------- audits

Report bijection_report(const Poly& D, FormClass mode, int maxdeg) {
    BijectionAudit a = bijection_audit(D, mode, maxdeg);
    Report r;
    r.experiment = "qform-audit";
    r.config = {{"field", D.field()->spec()}, {"D", D.to_string()}, {"mode", form_class_name(mode)}, {"max_degA", maxdeg}};
    r.columns = {"A", "f", "fiber_size", "expected", "uniform"};
    for (const auto& f : a.fibers)
        r.add_row({f.sol.A.to_string(), f.sol.f.to_string(), std::to_string(f.fiber_size), std::to_string(f.expected),
                   f.uniform ? "1" : "0"});
    r.meta = {{"fibers", a.fibers.size()}, {"missing", a.missing}, {"extraneous", a.extraneous}};
    r.ok = a.ok;
    return r;
}

Report convergence_audit(const Poly& D, int nmax, int nmin) {
    if (nmin < 1 || nmax < nmin) throw Error(ErrorCode::UsageError, "need 1 <= nmin <= nmax");
    Report r;
    r.experiment = "convergence";
    r.config = {{"field", D.field()->spec()}, {"D", D.to_string()}, {"n_min", nmin}, {"n_max", nmax}};
    r.columns = {"n", "partial", "target", "gap"};
    long double first = 0, last = 0;
    for (int n = nmin; n <= nmax; ++n) {
        Convergence c = convergence_check(D, n);
        if (n == nmin) first = c.gap;
        last = c.gap;
        r.add_row({std::to_string(n), fmt_float(c.partial), fmt_float(c.target), fmt_float(c.gap)});
    }
    r.meta = {{"gap_decreased", last < first}};
    return r;
}

Report singular_series_report(const Poly& D, int cutoff) {
    SingularSeries s = singular_series(D, cutoff);
    Report r;
    r.experiment = "singular-series";
    r.config = {{"field", D.field()->spec()}, {"D", D.to_string()}, {"cutoff", cutoff}};
    r.columns = {"cutoff", "value", "euler", "path_gap"};
    r.add_row({std::to_string(s.cutoff), fmt_float(s.value), fmt_float(s.euler), fmt_float(s.path_gap)});
    return r;
}

Interval interval_for(const BiPoly& F, const Poly& r, int dim) {
    if (dim < 0) throw Error(ErrorCode::UsageError, "dimension must be nonnegative");
    Interval I0 = Interval::make(r, dim);
    for (const auto& J : partition_interval(F, I0))
        if (J.contains(r)) return J;
    throw Error(ErrorCode::Internal, "partition does not cover r");
}

Report mobius_formula_report(const BiPoly& F, const Poly& r, int dim) {
    Interval I = interval_for(F, r, dim);
    MobiusReport m = mobius_formula_verify(F, r, I);
    Report rep;
    rep.experiment = "mobius-formula-verify";
    rep.config = {{"field", F.field()->spec()}, {"F", F.to_string()}, {"r", r.to_string()}, {"d", dim}};
    rep.columns = {"interval_dim", "checked", "passed", "failed", "infinite", "nonzero_mu", "scarcity_bound"};
    rep.add_row({std::to_string(I.dim), std::to_string(m.checked), std::to_string(m.passed), std::to_string(m.failed),
                 m.infinite ? "1" : "0", std::to_string(m.nonzero_mu), std::to_string(m.scarcity_bound)});
    rep.meta = {{"failures", m.failures}};
    rep.ok = m.ok;
    return rep;
}

Report trace_sum_identity_report(const BiPoly& F, const Poly& r, int dim, const TraceSpec& base) {
    const Field* K = F.field();
    const uint64_t p = K->p();
    Interval I = interval_for(F, r, dim);
    WData w = build_W(F, r, I);
    TraceSpec t = build_tFr(F, r, base, I);
    int sign = mobius_sign(K, w.d, w.a);
    int ns = static_cast<int>((I.dim + p - 1) / p);
    CycloSum lhs(p), rhs(p);
    for (uint64_t i = 0; i < count_pow(K->q(), ns); ++i) {
        Poly s = poly_from_index(K, i, ns);
        Poly g = r + pow(s, p);
        Poly v = F.eval_T(g);
        int mu = v.is_zero() ? 0 : moebius(v);
        if (mu) lhs += eval(base, g).times_int(mu);
        rhs += eval(t, s);
    }
    rhs = rhs.times_int(sign);
    Report rep;
    rep.experiment = "trace-sum";
    rep.config = {{"field", K->spec()}, {"F", F.to_string()}, {"r", r.to_string()}, {"d", dim}, {"base", base.to_json()}};
    rep.columns = {"interval_dim", "terms", "sign", "lhs", "rhs", "equal"};
    bool eq = lhs == rhs;
    rep.add_row({std::to_string(I.dim), std::to_string(count_pow(K->q(), ns)), std::to_string(sign), lhs.to_json().dump(),
                 rhs.to_json().dump(), eq ? "1" : "0"});
    rep.meta = {{"tFr", t.to_json()}, {"M", w.M.to_string()}};
    rep.ok = eq;
    return rep;
}

Report trace_bound_report(const TraceSpec& t, BoundMode mode, const std::vector<int>& ns, const Poly& h) {
    static const char* names[] = {"short", "complete", "polya_vinogradov"};
    Report rep;
    rep.experiment = "trace-sum";
    rep.config = {{"field", t.F->spec()}, {"spec", t.to_json()}, {"mode", names[static_cast<int>(mode)]}, {"n", ns},
                  {"h", h.field() ? h.to_string() : "1"}};
    rep.columns = {"n", "sum", "abs", "bound", "ratio", "exact", "ok"};
    for (int n : ns) {
        BoundReport b = bound_audit(t, mode, n, h);
        rep.add_row({std::to_string(n), b.sum.to_json().dump(), fmt_float(b.abs_sum), fmt_float(b.bound), fmt_float(b.ratio),
                     b.exact ? "1" : "0", b.ok ? "1" : "0"});
        rep.ok &= b.ok;
    }
    rep.meta = {{"rank", t.rank()}, {"conductor", t.conductor()}};
    return rep;
}

}  // namespace ffnt
