// Exact arithmetic: rationals, exact nonzero complex numbers (prime-exponent
// magnitude times a rational fraction of a turn), rational linear algebra,
// Smith normal form, multiplicative power systems and strict positivity.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ncd {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class ArithmeticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- rationals

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Integer floor(const Rational& q) { return floor_div(num(q), den(q)); }

// fractional part in [0,1)
inline Rational frac(const Rational& q) { return q - Rational(floor(q)); }

inline std::string to_string(const Rational& q) { return q.str(); }
inline std::string to_string(const Integer& z) { return z.str(); }

inline Rational parse_rational(const std::string& text)
{
    auto bad = [&] { return ArithmeticError("malformed rational '" + text + "'"); };
    auto is_int = [](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i >= s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_int(text)) throw bad();
        return Rational(Integer(text));
    }
    std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    if (!is_int(a) || !is_int(b) || b[0] == '-' || b[0] == '+') throw bad();
    Integer d(b);
    if (d == 0) throw ArithmeticError("zero denominator in '" + text + "'");
    return Rational(Integer(a), d);
}

inline Integer lcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

// ---------------------------------------------------------------- primes

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail

// deterministic Miller-Rabin for 64-bit inputs
inline bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// Factor a positive integer. Trial division up to 2^20, the cofactor must then
// be 1 or prime (enough for every coefficient this library is fed).
inline std::map<std::uint64_t, Integer> factor(Integer n)
{
    if (n <= 0) throw ArithmeticError("factor: non-positive input");
    std::map<std::uint64_t, Integer> out;
    for (std::uint64_t p = 2; p < (1u << 20) && Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            out[p] += 1;
            n /= p;
        }
    }
    if (n > 1) {
        if (n > Integer(std::numeric_limits<std::uint64_t>::max()) ||
            !is_prime(static_cast<std::uint64_t>(n)))
            throw ArithmeticError("factor: cofactor " + n.str() + " out of range");
        out[static_cast<std::uint64_t>(n)] += 1;
    }
    return out;
}

// ---------------------------------------------------------------- ExactComplex

// Nonzero complex number |z| * exp(2 pi i arg) with |z| = prod p^{e_p}, e_p rational.
class ExactComplex {
public:
    using Magnitude = std::map<std::uint64_t, Rational>;

    ExactComplex() = default; // the unit 1

    ExactComplex(Magnitude mag, Rational arg) : mag_(std::move(mag)), arg_(frac(arg))
    {
        for (auto it = mag_.begin(); it != mag_.end();) {
            if (!is_prime(it->first))
                throw ArithmeticError("magnitude key " + std::to_string(it->first) + " is not prime");
            it = (it->second == 0) ? mag_.erase(it) : std::next(it);
        }
    }

    static ExactComplex from_rational(const Rational& q)
    {
        if (q == 0) throw ArithmeticError("zero has no ExactComplex representation");
        Magnitude m;
        Integer a = boost::multiprecision::abs(num(q)), b = den(q);
        if (a > 1)
            for (auto& [p, e] : factor(a)) m[p] += Rational(e);
        if (b > 1)
            for (auto& [p, e] : factor(b)) m[p] -= Rational(e);
        return ExactComplex(std::move(m), q < 0 ? Rational(1, 2) : Rational(0));
    }

    static ExactComplex root_of_unity(const Rational& turns) { return ExactComplex({}, turns); }

    const Magnitude& magnitude() const { return mag_; }
    const Rational& arg() const { return arg_; }
    Rational exponent(std::uint64_t p) const
    {
        auto it = mag_.find(p);
        return it == mag_.end() ? Rational(0) : it->second;
    }
    bool is_unit() const { return mag_.empty() && arg_ == 0; }

    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b)
    {
        Magnitude m = a.mag_;
        for (auto& [p, e] : b.mag_) m[p] += e;
        return ExactComplex(std::move(m), a.arg_ + b.arg_);
    }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) { return a * b.inverse(); }
    ExactComplex& operator*=(const ExactComplex& b) { return *this = *this * b; }

    ExactComplex inverse() const { return pow(Rational(-1)); }

    // principal value: exponents and argument scaled, argument reduced mod 1
    ExactComplex pow(const Rational& q) const
    {
        Magnitude m;
        for (auto& [p, e] : mag_) m[p] = e * q;
        return ExactComplex(std::move(m), arg_ * q);
    }

    // all n values whose n-th power is *this
    std::vector<ExactComplex> roots(long n) const
    {
        if (n < 1) throw ArithmeticError("roots: n must be positive");
        std::vector<ExactComplex> out;
        Magnitude m;
        for (auto& [p, e] : mag_) m[p] = e / n;
        for (long j = 0; j < n; ++j) out.emplace_back(m, (arg_ + j) / n);
        return out;
    }

    // exact rational value if the number is real rational
    std::optional<Rational> as_rational() const
    {
        if (arg_ != 0 && arg_ != Rational(1, 2)) return std::nullopt;
        Rational v = 1;
        for (auto& [p, e] : mag_) {
            if (den(e) != 1) return std::nullopt;
            Integer k = boost::multiprecision::abs(num(e));
            Integer pk = boost::multiprecision::pow(Integer(p), static_cast<unsigned>(k));
            v = (e > 0) ? v * Rational(pk) : v / Rational(pk);
        }
        return arg_ == 0 ? v : -v;
    }

    // display: (prime-power product, turns)
    std::string str() const
    {
        std::ostringstream os;
        os << '(';
        if (mag_.empty()) os << '1';
        bool first = true;
        for (auto& [p, e] : mag_) {
            if (!first) os << '*';
            first = false;
            os << p;
            if (e != 1) {
                bool paren = den(e) != 1 || e < 0;
                os << '^' << (paren ? "(" : "") << e.str() << (paren ? ")" : "");
            }
        }
        os << ", " << arg_.str() << " turn)";
        return os.str();
    }

    friend bool operator==(const ExactComplex& a, const ExactComplex& b)
    {
        return a.arg_ == b.arg_ && a.mag_ == b.mag_;
    }
    friend bool operator!=(const ExactComplex& a, const ExactComplex& b) { return !(a == b); }
    friend bool operator<(const ExactComplex& a, const ExactComplex& b)
    {
        if (a.mag_ != b.mag_) return a.mag_ < b.mag_;
        return a.arg_ < b.arg_;
    }

private:
    Magnitude mag_;
    Rational arg_;
};

inline ExactComplex mul(const ExactComplex& a, const ExactComplex& b) { return a * b; }
inline ExactComplex pow(const ExactComplex& a, const Rational& q) { return a.pow(q); }
inline std::vector<ExactComplex> roots(const ExactComplex& a, long n) { return a.roots(n); }

// ---------------------------------------------------------------- matrices

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, T fill = T(0)) : rows_(r), cols_(c), a_(r * c, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init)
    {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        for (auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix");
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const
    {
        return std::vector<T>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }
    void append_row(const std::vector<T>& r)
    {
        if (rows_ == 0 && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw std::invalid_argument("row length mismatch");
        a_.insert(a_.end(), r.begin(), r.end());
        ++rows_;
    }
    void swap_rows(std::size_t i, std::size_t k)
    {
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
    }
    void swap_cols(std::size_t j, std::size_t k)
    {
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, j), (*this)(i, k));
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y)
    {
        if (x.cols_ != y.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix z(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x(i, k) == 0) continue;
                for (std::size_t j = 0; j < y.cols_; ++j) z(i, j) += x(i, k) * y(k, j);
            }
        return z;
    }
    friend bool operator==(const Matrix& x, const Matrix& y)
    {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

    template <class U>
    Matrix<U> cast() const
    {
        Matrix<U> m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = U((*this)(i, j));
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using RationalMatrix = Matrix<Rational>;
using IntegerMatrix = Matrix<Integer>;

template <class T>
std::vector<T> mat_vec(const Matrix<T>& m, const std::vector<T>& v)
{
    if (v.size() != m.cols()) throw std::invalid_argument("apply: shape mismatch");
    std::vector<T> out(m.rows(), T(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
    return out;
}

// ---------------------------------------------------------------- linear algebra

struct RowEchelon {
    RationalMatrix r;                 // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

inline RowEchelon rref(RationalMatrix a)
{
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
        std::size_t p = row;
        while (p < a.rows() && a(p, c) == 0) ++p;
        if (p == a.rows()) continue;
        a.swap_rows(p, row);
        Rational inv = 1 / a(row, c);
        for (std::size_t j = c; j < a.cols(); ++j) a(row, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, c) == 0) continue;
            Rational f = a(i, c);
            for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
        }
        piv.push_back(c);
        ++row;
    }
    return {std::move(a), std::move(piv)};
}

inline std::size_t rank(const RationalMatrix& a) { return rref(a).pivots.size(); }

// basis of {v : A v = 0}; one vector per free column
inline std::vector<std::vector<Rational>> rational_nullspace(const RationalMatrix& a)
{
    RowEchelon e = rref(a);
    std::vector<bool> is_piv(a.cols(), false);
    for (auto c : e.pivots) is_piv[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_piv[f]) continue;
        std::vector<Rational> v(a.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.r(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

// particular solution of A x = b (free variables zero), or nullopt if inconsistent
inline std::optional<std::vector<Rational>> solve_linear(const RationalMatrix& a, const std::vector<Rational>& b)
{
    if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: shape mismatch");
    RationalMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    RowEchelon e = rref(aug);
    std::vector<Rational> x(a.cols(), Rational(0));
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        if (e.pivots[i] == a.cols()) return std::nullopt;
        x[e.pivots[i]] = e.r(i, a.cols());
    }
    return x;
}

// scale a nonzero rational vector to a primitive integer vector (same direction)
inline std::vector<Rational> primitive(std::vector<Rational> v)
{
    Integer l = 1, g = 0;
    for (auto& x : v) l = lcm(l, den(x));
    for (auto& x : v) {
        x *= Rational(l);
        g = boost::multiprecision::gcd(g, num(x));
    }
    if (g > 1)
        for (auto& x : v) x /= Rational(g);
    return v;
}

// ---------------------------------------------------------------- Smith form

struct SmithForm {
    IntegerMatrix u, d, v; // u * m * v == d, u and v unimodular, d diagonal with d_i | d_{i+1}
    std::size_t rank = 0;
};

inline SmithForm smith_normal_form(const IntegerMatrix& m)
{
    const std::size_t R = m.rows(), C = m.cols();
    IntegerMatrix d = m, u = IntegerMatrix::identity(R), v = IntegerMatrix::identity(C);
    auto row_op = [&](std::size_t dst, std::size_t src, const Integer& f) { // row dst -= f*row src
        for (std::size_t j = 0; j < C; ++j) d(dst, j) -= f * d(src, j);
        for (std::size_t j = 0; j < R; ++j) u(dst, j) -= f * u(src, j);
    };
    auto col_op = [&](std::size_t dst, std::size_t src, const Integer& f) { // col dst -= f*col src
        for (std::size_t i = 0; i < R; ++i) d(i, dst) -= f * d(i, src);
        for (std::size_t i = 0; i < C; ++i) v(i, dst) -= f * v(i, src);
    };
    auto swap_r = [&](std::size_t a, std::size_t b) { d.swap_rows(a, b); u.swap_rows(a, b); };
    auto swap_c = [&](std::size_t a, std::size_t b) { d.swap_cols(a, b); v.swap_cols(a, b); };

    std::size_t t = 0;
    for (; t < std::min(R, C); ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block becomes the pivot
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t i = t; i < R; ++i)
                for (std::size_t j = t; j < C; ++j)
                    if (d(i, j) != 0 && (!best || abs(d(i, j)) < abs(d(best->first, best->second))))
                        best = {i, j};
            if (!best) goto done;
            swap_r(t, best->first);
            swap_c(t, best->second);
            bool clean = true;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (d(i, t) == 0) continue;
                row_op(i, t, d(i, t) / d(t, t));
                if (d(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (d(t, j) == 0) continue;
                col_op(j, t, d(t, j) / d(t, t));
                if (d(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility: pivot must divide the whole trailing block
            std::optional<std::size_t> bad;
            for (std::size_t i = t + 1; i < R && !bad; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (d(i, j) % d(t, t) != 0) { bad = i; break; }
            if (!bad) break;
            row_op(t, *bad, Integer(-1)); // row t += row bad
        }
        if (d(t, t) < 0) {
            for (std::size_t j = 0; j < C; ++j) d(t, j) = -d(t, j);
            for (std::size_t j = 0; j < R; ++j) u(t, j) = -u(t, j);
        }
    }
done:
    SmithForm s{std::move(u), std::move(d), std::move(v), 0};
    for (std::size_t i = 0; i < std::min(R, C); ++i)
        if (s.d(i, i) != 0) ++s.rank;
    return s;
}

// ---------------------------------------------------------------- power systems

// Solutions of prod_j mu_j^{M_kj} = p_k.
struct PowerSolution {
    bool consistent = false;
    std::optional<std::size_t> violated;      // first equation whose addition is inconsistent
    Integer branch_count = 0;                 // torsion branches (product of nonzero elementary divisors)
    std::size_t free_dim = 0;                 // dimension of the continuous (torus) part
    std::vector<std::vector<ExactComplex>> representatives; // one per branch, up to a cap
    bool truncated = false;
};

namespace detail {

inline bool magnitude_consistent(const IntegerMatrix& m, const std::vector<ExactComplex>& p, std::size_t k,
                                 std::map<std::uint64_t, std::vector<Rational>>* sol)
{
    RationalMatrix a(k, m.cols());
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = Rational(m(i, j));
    std::map<std::uint64_t, bool> primes;
    for (std::size_t i = 0; i < k; ++i)
        for (auto& kv : p[i].magnitude()) primes[kv.first] = true;
    for (auto& kv : primes) {
        std::vector<Rational> b(k);
        for (std::size_t i = 0; i < k; ++i) b[i] = p[i].exponent(kv.first);
        auto x = solve_linear(a, b);
        if (!x) return false;
        if (sol) (*sol)[kv.first] = *x;
    }
    return true;
}

inline bool argument_consistent(const IntegerMatrix& m, const std::vector<ExactComplex>& p, std::size_t k)
{
    IntegerMatrix sub(k, m.cols());
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) sub(i, j) = m(i, j);
    SmithForm s = smith_normal_form(sub);
    for (std::size_t i = s.rank; i < k; ++i) {
        Rational phi = 0;
        for (std::size_t j = 0; j < k; ++j) phi += Rational(s.u(i, j)) * p[j].arg();
        if (frac(phi) != 0) return false;
    }
    return true;
}

} // namespace detail

inline PowerSolution solve_power_system(const IntegerMatrix& m, const std::vector<ExactComplex>& p,
                                        std::size_t cap = 4096)
{
    if (p.size() != m.rows()) throw std::invalid_argument("solve_power_system: one value per equation required");
    const std::size_t R = m.rows(), C = m.cols();
    PowerSolution out;

    std::map<std::uint64_t, std::vector<Rational>> mag;
    bool ok = detail::magnitude_consistent(m, p, R, &mag) && detail::argument_consistent(m, p, R);
    if (!ok) {
        for (std::size_t k = 1; k <= R; ++k) {
            if (!detail::magnitude_consistent(m, p, k, nullptr) || !detail::argument_consistent(m, p, k)) {
                out.violated = k - 1;
                break;
            }
        }
        return out;
    }
    out.consistent = true;

    SmithForm s = smith_normal_form(m);
    out.free_dim = C - s.rank;
    out.branch_count = 1;
    for (std::size_t i = 0; i < s.rank; ++i) out.branch_count *= s.d(i, i);

    std::vector<Rational> phi(R, Rational(0));
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < R; ++j) phi[i] += Rational(s.u(i, j)) * p[j].arg();

    // enumerate psi_i = (phi_i + j_i)/d_i for i < rank, psi_i = 0 beyond; theta = V psi
    std::vector<Integer> idx(s.rank, Integer(0));
    for (;;) {
        if (out.representatives.size() >= cap) {
            out.truncated = true;
            break;
        }
        std::vector<Rational> psi(C, Rational(0));
        for (std::size_t i = 0; i < s.rank; ++i) psi[i] = (phi[i] + Rational(idx[i])) / Rational(s.d(i, i));
        std::vector<ExactComplex> sol;
        for (std::size_t j = 0; j < C; ++j) {
            Rational theta = 0;
            for (std::size_t i = 0; i < C; ++i) theta += Rational(s.v(j, i)) * psi[i];
            ExactComplex::Magnitude mg;
            for (auto& [prime, x] : mag) mg[prime] = x[j];
            sol.emplace_back(std::move(mg), theta);
        }
        out.representatives.push_back(std::move(sol));
        std::size_t i = 0;
        for (; i < s.rank; ++i) {
            if (++idx[i] < s.d(i, i)) break;
            idx[i] = 0;
        }
        if (i == s.rank) break;
    }
    return out;
}

// ---------------------------------------------------------------- positivity

// A rational v with A v = 0 and every v_j > 0, or nullopt. Decided exactly by
// phase-one simplex (Bland's rule) on {A v = 0, v >= 1}; the witness is
// returned as a primitive integer vector.
inline std::optional<std::vector<Rational>> strict_positive_solution(const RationalMatrix& a)
{
    const std::size_t m = a.rows(), n = a.cols();
    if (n == 0) return std::vector<Rational>{};
    // v = 1 + w, w >= 0:  A w = -A 1
    const std::size_t W = n + m + 1; // w, artificials, rhs
    RationalMatrix t(m, W);
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        Rational b = 0;
        for (std::size_t j = 0; j < n; ++j) b -= a(i, j);
        Rational sgn = b < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) t(i, j) = sgn * a(i, j);
        t(i, n + i) = 1;
        t(i, W - 1) = sgn * b;
        basis[i] = n + i;
    }
    // reduced costs of the phase-one objective sum(artificials)
    std::vector<Rational> r(W, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) r[j] -= t(i, j);
    for (std::size_t i = 0; i < m; ++i) r[W - 1] -= t(i, W - 1);

    for (;;) {
        std::size_t enter = W;
        for (std::size_t j = 0; j + 1 < W; ++j)
            if (r[j] < 0) { enter = j; break; }
        if (enter == W) break;
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t(i, enter) <= 0) continue;
            Rational ratio = t(i, W - 1) / t(i, enter);
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) break; // unbounded cannot happen for phase one
        Rational piv = t(leave, enter);
        for (std::size_t j = 0; j < W; ++j) t(leave, j) /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t(i, enter) == 0) continue;
            Rational f = t(i, enter);
            for (std::size_t j = 0; j < W; ++j) t(i, j) -= f * t(leave, j);
        }
        if (r[enter] != 0) {
            Rational f = r[enter];
            for (std::size_t j = 0; j < W; ++j) r[j] -= f * t(leave, j);
        }
        basis[leave] = enter;
    }
    if (r[W - 1] != 0) return std::nullopt; // optimum sum of artificials is -r[W-1] > 0

    std::vector<Rational> v(n, Rational(1));
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) v[basis[i]] += t(i, W - 1);
    return primitive(std::move(v));
}

} // namespace ncd
