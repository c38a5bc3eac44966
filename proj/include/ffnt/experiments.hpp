#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffnt/mobius.hpp"
#include "ffnt/poly.hpp"
#include "ffnt/qform.hpp"
#include "ffnt/tracefn.hpp"

namespace ffnt {

struct RunOptions {
    int threads = 1;
    uint64_t seed = 1;
    // evaluations allowed per run
    uint64_t cap = 1000000000ull;
};

// a table with a config echo; cells are preformatted strings
struct Report {
    std::string experiment;
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json meta = nlohmann::json::object();
    bool ok = true;

    void add_row(std::vector<std::string> r);
    std::string to_csv() const;
    nlohmann::json to_json() const;
    std::string render(const std::string& format) const;

    static Report parse_csv(const std::string& text);
    static Report from_json(const nlohmann::json& j);
    static Report parse(const std::string& text);
};

// 15 significant digits
std::string fmt_float(long double x);
std::string fmt_int(__int128 x);

// deterministic block scheduler: fn(block, lo, hi) per block, blocks merged in index order by the caller
void run_blocks(uint64_t n, uint64_t block, int threads, const std::function<void(uint64_t, uint64_t, uint64_t)>& fn);

// mu over a prime field on raw coefficient arrays
class PrimeMu {
public:
    explicit PrimeMu(uint64_t p);
    // g[0..n] is overwritten; 0 for the zero polynomial
    int mu(uint32_t* g, int n) const;
    int mu(const Poly& f) const;

private:
    uint32_t mul(uint32_t a, uint32_t b) const { return tab_.empty() ? static_cast<uint32_t>(uint64_t{a} * b % p_) : tab_[a * p_ + b]; }
    uint32_t resultant(uint32_t* A, int m, uint32_t* B, int n) const;
    uint32_t p_;
    std::vector<uint32_t> tab_, inv_;
    std::vector<int> chi_;
};

// sum of mu(F(u,f)) over |f| <= q^m, for each m in ms
Report chowla_scan(const BiPoly& F, const std::vector<int>& ms, const RunOptions& opt);
// sum of Lambda(f^2 + D) over monic f of degree d, against S_q(F) q^d
Report bateman_horn_scan(const Poly& D, const std::vector<int>& ds, const RunOptions& opt, int cutoff = 12);

// sum over 0 != y, deg y <= n of |sum_{deg x < m, (x,y)=1} mu(a x^2 + b x y + c y^2) e(h xbar / y)|
Report kloosterman_twisted_scan(const Poly& a, const Poly& b, const Poly& c, const Poly& h, int n, int m,
                                const RunOptions& opt);

Report bijection_report(const Poly& D, FormClass mode, int maxdeg);
Report convergence_audit(const Poly& D, int nmax, int nmin = 4);
Report singular_series_report(const Poly& D, int cutoff);
Report mobius_formula_report(const BiPoly& F, const Poly& r, int dim);
// sum over deg s < ceil(dim/p) of mu(F(u, r + s^p)) base(r + s^p) against sign * t_{F,r}(s)
Report trace_sum_identity_report(const BiPoly& F, const Poly& r, int dim, const TraceSpec& base);
Report trace_bound_report(const TraceSpec& t, BoundMode mode, const std::vector<int>& ns, const Poly& h);

// the piece of the leading-term partition of I_{r,dim} that contains r
Interval interval_for(const BiPoly& F, const Poly& r, int dim);

}  // namespace ffnt
