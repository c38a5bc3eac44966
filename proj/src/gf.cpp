#include "ffnt/gf.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "ffnt/poly.hpp"

namespace ffnt {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NotPrime: return "NotPrime";
        case ErrorCode::EvenCharacteristic: return "EvenCharacteristic";
        case ErrorCode::ReducibleModulus: return "ReducibleModulus";
        case ErrorCode::FieldMismatch: return "FieldMismatch";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorCode::DegreeContractViolated: return "DegreeContractViolated";
        case ErrorCode::ConstantPolynomial: return "ConstantPolynomial";
        case ErrorCode::NotCoprime: return "NotCoprime";
        case ErrorCode::ZeroModulus: return "ZeroModulus";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
        case ErrorCode::NotCoprimeModuli: return "NotCoprimeModuli";
        case ErrorCode::ZeroInverse: return "ZeroInverse";
        case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorCode::NotIndefinite: return "NotIndefinite";
        case ErrorCode::ReducibleF: return "ReducibleF";
        case ErrorCode::NotMonic: return "NotMonic";
        case ErrorCode::NotPrimitive: return "NotPrimitive";
        case ErrorCode::NotASolution: return "NotASolution";
        case ErrorCode::NotStandardDefinite: return "NotStandardDefinite";
        case ErrorCode::NotShortVector: return "NotShortVector";
        case ErrorCode::WrongMode: return "WrongMode";
        case ErrorCode::NotUnimodular: return "NotUnimodular";
        case ErrorCode::InfiniteIntersection: return "InfiniteIntersection";
        case ErrorCode::NoProbePoint: return "NoProbePoint";
        case ErrorCode::CoefficientBoundViolated: return "CoefficientBoundViolated";
        case ErrorCode::Inseparable: return "Inseparable";
        case ErrorCode::MissingDirichletComponent: return "MissingDirichletComponent";
        case ErrorCode::DegenerateDiscriminant: return "DegenerateDiscriminant";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UsageError: return "UsageError";
        case ErrorCode::AuditFailure: return "AuditFailure";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<uint64_t> prime_factors_u64(uint64_t n) {
    std::vector<uint64_t> out;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

namespace {

constexpr uint64_t kTableLimit = 1u << 20;
constexpr uint64_t kAddTableLimit = 729;

struct Registry {
    std::mutex mu;
    std::map<std::tuple<uint64_t, const Field*, std::vector<Elem>>, std::unique_ptr<Field>> fields;
};

Registry& registry() {
    static Registry r;
    return r;
}

}  // namespace

const Field* Field::prime(uint64_t p) {
    if (p == 2) throw Error(ErrorCode::EvenCharacteristic, "p = 2");
    if (!is_prime_u64(p)) throw Error(ErrorCode::NotPrime, std::to_string(p));
    if (p > (1ull << 31)) throw Error(ErrorCode::NotPrime, "p too large");
    auto& reg = registry();
    std::unique_lock lock(reg.mu);
    auto key = std::make_tuple(p, static_cast<const Field*>(nullptr), std::vector<Elem>{});
    auto it = reg.fields.find(key);
    if (it != reg.fields.end()) return it->second.get();
    std::unique_ptr<Field> f(new Field());
    f->p_ = p;
    f->q_ = p;
    f->k_ = 1;
    f->absk_ = 1;
    f->mod_ = {0, 1};
    f->init_tables();
    const Field* out = f.get();
    reg.fields.emplace(key, std::move(f));
    return out;
}

const Field* Field::extend(const Field* base, const std::vector<Elem>& modulus) {
    if (modulus.size() < 2 || modulus.back() != 1)
        throw Error(ErrorCode::ReducibleModulus, "modulus must be monic of degree >= 1");
    if (modulus.size() == 2) return base;
    int k = static_cast<int>(modulus.size()) - 1;
    long double approx = 1;
    for (int i = 0; i < k; ++i) approx *= static_cast<long double>(base->q_);
    if (approx > static_cast<long double>(1ull << 62))
        throw Error(ErrorCode::DegreeOutOfRange, "field too large for 64-bit codes");
    auto& reg = registry();
    std::unique_lock lock(reg.mu);
    auto key = std::make_tuple(base->p_, base, modulus);
    auto it = reg.fields.find(key);
    if (it != reg.fields.end()) return it->second.get();
    std::unique_ptr<Field> f(new Field());
    f->p_ = base->p_;
    f->base_ = base;
    f->k_ = k;
    f->absk_ = base->absk_ * k;
    f->mod_ = modulus;
    f->q_ = 1;
    for (int i = 0; i < k; ++i) f->q_ *= base->q_;
    lock.unlock();
    f->init_tables();
    lock.lock();
    auto [pos, inserted] = reg.fields.emplace(key, std::move(f));
    return pos->second.get();
}

const Field* Field::make(uint64_t p, int k, const std::optional<std::vector<uint64_t>>& modulus) {
    const Field* fp = prime(p);
    if (k < 1) throw Error(ErrorCode::DegreeOutOfRange, "k must be >= 1");
    if (k == 1 && !modulus) return fp;
    if (modulus) {
        if (static_cast<int>(modulus->size()) != k + 1 || modulus->back() != 1)
            throw Error(ErrorCode::ReducibleModulus, "modulus must be monic of degree k");
        for (auto c : *modulus)
            if (c >= p) throw Error(ErrorCode::ParseError, "modulus coefficient out of range");
        Poly m(fp, std::vector<Elem>(modulus->begin(), modulus->end()));
        if (!is_irreducible(m)) throw Error(ErrorCode::ReducibleModulus, m.to_string());
        if (k == 1) return fp;
        return extend(fp, *modulus);
    }
    std::vector<Elem> c(k + 1, 0);
    c[k] = 1;
    while (true) {
        Poly m(fp, c);
        if (is_irreducible(m)) return extend(fp, c);
        int i = 0;
        while (i < k && ++c[i] == p) c[i++] = 0;
        if (i == k) throw Error(ErrorCode::Internal, "no irreducible modulus found");
    }
}

const Field* Field::parse(const std::string& spec) {
    std::string s = spec;
    std::string mod;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mod = s.substr(slash + 1);
        s = s.substr(0, slash);
    }
    uint64_t p = 0;
    int k = 1;
    try {
        auto caret = s.find('^');
        if (caret == std::string::npos) {
            p = std::stoull(s);
        } else {
            p = std::stoull(s.substr(0, caret));
            k = std::stoi(s.substr(caret + 1));
        }
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad field spec '" + spec + "'");
    }
    if (mod.empty()) return make(p, k);
    std::vector<uint64_t> m;
    std::stringstream ss(mod);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            m.push_back(std::stoull(tok));
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad modulus '" + mod + "'");
        }
    }
    return make(p, k, m);
}

std::string Field::spec() const {
    std::ostringstream os;
    if (base_ == nullptr) {
        os << p_;
        return os.str();
    }
    if (base_->is_prime_field()) {
        os << p_ << "^" << k_ << "/";
    } else {
        os << "(" << base_->spec() << ")[" << k_ << "]/";
    }
    for (size_t i = 0; i < mod_.size(); ++i) os << (i ? "," : "") << mod_[i];
    return os.str();
}

std::vector<Elem> Field::digits(Elem a) const {
    std::vector<Elem> d(k_);
    uint64_t b = base_ ? base_->q_ : p_;
    for (int i = 0; i < k_; ++i) {
        d[i] = a % b;
        a /= b;
    }
    return d;
}

Elem Field::from_digits(const std::vector<Elem>& d) const {
    uint64_t b = base_ ? base_->q_ : p_;
    Elem r = 0;
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) r = r * b + d[i];
    return r;
}

Elem Field::add_slow(Elem a, Elem b) const {
    Elem r = 0, pw = 1;
    while (a | b) {
        Elem s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        r += s * pw;
        pw *= p_;
        a /= p_;
        b /= p_;
    }
    return r;
}

Elem Field::neg_slow(Elem a) const {
    Elem r = 0, pw = 1;
    while (a) {
        Elem d = a % p_;
        r += (d == 0 ? 0 : p_ - d) * pw;
        pw *= p_;
        a /= p_;
    }
    return r;
}

Elem Field::mul_generic(Elem a, Elem b) const {
    if (base_ == nullptr) return static_cast<Elem>(static_cast<unsigned __int128>(a) * b % p_);
    auto da = digits(a), db = digits(b);
    std::vector<Elem> r(2 * k_ - 1, 0);
    for (int i = 0; i < k_; ++i) {
        if (da[i] == 0) continue;
        for (int j = 0; j < k_; ++j) {
            if (db[j] == 0) continue;
            r[i + j] = base_->add(r[i + j], base_->mul(da[i], db[j]));
        }
    }
    for (int i = 2 * k_ - 2; i >= k_; --i) {
        Elem c = r[i];
        if (c == 0) continue;
        for (int j = 0; j < k_; ++j)
            r[i - k_ + j] = base_->sub(r[i - k_ + j], base_->mul(c, mod_[j]));
    }
    r.resize(k_);
    return from_digits(r);
}

Elem Field::pow_generic(Elem a, uint64_t e) const {
    Elem r = 1;
    while (e) {
        if (e & 1) r = mul_generic(r, a);
        a = mul_generic(a, a);
        e >>= 1;
    }
    return r;
}

Elem Field::pow(Elem a, uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (!exp_.empty()) {
        unsigned __int128 t = static_cast<unsigned __int128>(log_[a]) * e % (q_ - 1);
        return exp_[static_cast<uint64_t>(t)];
    }
    Elem r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Elem Field::inv(Elem a) const {
    if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    if (!exp_.empty()) return exp_[log_[a] == 0 ? 0 : q_ - 1 - log_[a]];
    return pow(a, q_ - 2);
}

Elem Field::from_int(int64_t v) const {
    int64_t m = v % static_cast<int64_t>(p_);
    if (m < 0) m += static_cast<int64_t>(p_);
    return static_cast<Elem>(m);
}

int Field::chi2(Elem a) const {
    if (a == 0) return 0;
    if (!exp_.empty()) return (log_[a] & 1) ? -1 : 1;
    return pow(a, (q_ - 1) / 2) == 1 ? 1 : -1;
}

std::optional<Elem> Field::sqrt(Elem a) const {
    if (a == 0) return Elem{0};
    int c = chi2(a);
    if (c != 1) return std::nullopt;
    Elem r;
    if (!exp_.empty()) {
        r = exp_[log_[a] / 2];
    } else {
        // Tonelli-Shanks
        uint64_t t = q_ - 1;
        int s = 0;
        while ((t & 1) == 0) {
            t >>= 1;
            ++s;
        }
        Elem z = gen_;
        Elem m_c = pow(z, t);
        Elem x = pow(a, (t + 1) / 2);
        Elem b = pow(a, t);
        int m = s;
        while (b != 1) {
            int i = 0;
            Elem bb = b;
            while (bb != 1) {
                bb = mul(bb, bb);
                ++i;
            }
            Elem w = m_c;
            for (int j = 0; j < m - i - 1; ++j) w = mul(w, w);
            x = mul(x, w);
            m_c = mul(w, w);
            b = mul(b, m_c);
            m = i;
        }
        r = x;
    }
    Elem r2 = neg(r);
    return r < r2 ? r : r2;
}

uint64_t Field::trace(Elem a) const {
    Elem s = 0, x = a;
    for (int i = 0; i < absk_; ++i) {
        s = add(s, x);
        x = pow(x, p_);
    }
    return s;
}

void Field::init_tables() {
    if (q_ <= kTableLimit) {
        auto fac = prime_factors_u64(q_ - 1);
        Elem g = 0;
        for (Elem c = 1; c < q_; ++c) {
            bool ok = true;
            for (auto l : fac) {
                if (pow_generic(c, (q_ - 1) / l) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                g = c;
                break;
            }
        }
        gen_ = g;
        exp_.assign(q_ - 1, 0);
        log_.assign(q_, 0);
        Elem x = 1;
        for (uint64_t i = 0; i + 1 < q_; ++i) {
            exp_[i] = static_cast<uint32_t>(x);
            log_[x] = static_cast<uint32_t>(i);
            x = mul_generic(x, g);
        }
        if (base_ != nullptr) {
            std::vector<Elem> nt(q_);
            for (Elem a = 0; a < q_; ++a) nt[a] = neg(a);
            negtab_ = std::move(nt);
            if (q_ <= kAddTableLimit) {
                std::vector<uint16_t> t(q_ * q_);
                for (Elem a = 0; a < q_; ++a)
                    for (Elem b = 0; b < q_; ++b) t[a * q_ + b] = static_cast<uint16_t>(add(a, b));
                addtab_ = std::move(t);
            }
        }
    } else {
        // any nonsquare serves Tonelli-Shanks
        for (Elem c = 2; c < q_; ++c) {
            if (pow_generic(c, (q_ - 1) / 2) != 1) {
                gen_ = c;
                break;
            }
        }
    }
}

static void check_same(const FieldElem& a, const FieldElem& b) {
    if (a.field != b.field) throw Error(ErrorCode::FieldMismatch, "elements from different fields");
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
    check_same(*this, o);
    return {field, field->add(code, o.code)};
}
FieldElem FieldElem::operator-(const FieldElem& o) const {
    check_same(*this, o);
    return {field, field->sub(code, o.code)};
}
FieldElem FieldElem::operator*(const FieldElem& o) const {
    check_same(*this, o);
    return {field, field->mul(code, o.code)};
}
FieldElem FieldElem::inverse() const { return {field, field->inv(code)}; }

}  // namespace ffnt
