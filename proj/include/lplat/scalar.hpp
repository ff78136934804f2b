#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lplat {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Certified rational interval [lo, hi] containing a real value.
struct Enclosure {
    Rat lo;
    Rat hi;

    Enclosure(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw error("Enclosure: lo > hi");
    }
    explicit Enclosure(const Rat& x) : lo(x), hi(x) {}

    Rat width() const { return hi - lo; }
    bool is_point() const { return lo == hi; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }

    Enclosure operator+(const Enclosure& o) const { return {lo + o.lo, hi + o.hi}; }
    Enclosure operator-(const Enclosure& o) const { return {lo - o.hi, hi - o.lo}; }
    Enclosure operator-() const { return {-hi, -lo}; }
    Enclosure operator*(const Rat& c) const {
        return c >= 0 ? Enclosure{lo * c, hi * c} : Enclosure{hi * c, lo * c};
    }
    Enclosure operator*(const Enclosure& o) const;
    friend Enclosure min(const Enclosure& a, const Enclosure& b);
    friend Enclosure max(const Enclosure& a, const Enclosure& b);
};

/// Descriptor of the single designated irrational of a structure.
///
/// Two flavours: a quadratic surd (p + q*sqrt(d))/r, or a continued
/// fraction [a0; a1, ..., ak] whose partial-quotient tail a1..ak repeats
/// forever.  Both guarantee irrationality, which is what certifies
/// termination of sign refinement.
class AlphaSpec {
public:
    static std::shared_ptr<const AlphaSpec> surd(Int p, Int q, Int d, Int r);
    static std::shared_ptr<const AlphaSpec> continued_fraction(std::vector<Int> quotients);

    /// Golden-ratio convenience: (sqrt(5)-1)/2.
    static std::shared_ptr<const AlphaSpec> golden();

    bool is_surd() const { return kind_ == Kind::Surd; }
    /// Surd parameters (p, q, d, r); only valid when is_surd().
    const Int& sp() const { return p_; }
    const Int& sq() const { return q_; }
    const Int& sd() const { return d_; }
    const Int& sr() const { return r_; }

    /// Partial quotients a_0, a_1, ... of the value (computed for surds,
    /// stored rule for continued fractions).
    Int partial_quotient(std::size_t i) const;

    /// Denominators (and numerators) of the convergents p_i/q_i.
    std::pair<Int, Int> convergent(std::size_t i) const;

    /// Nested rational interval of width <= w around the value.
    Enclosure enclose(const Rat& w) const;

    /// Sign of (alpha - x) for rational x; never 0 (alpha is irrational).
    int cmp_with_rational(const Rat& x) const;

    /// alpha^2 = a + b*alpha with rational a, b, when expressible.
    std::optional<std::pair<Rat, Rat>> square_decomposition() const;

    std::string text() const { return text_; }

    /// Structural identity; scalars from different specs never mix.
    bool same(const AlphaSpec& o) const { return text_ == o.text_; }

private:
    enum class Kind { Surd, CF };
    AlphaSpec() = default;

    Enclosure refine_to(const Rat& w) const;

    Kind kind_ = Kind::Surd;
    Int p_, q_, d_, r_;                 // surd
    std::vector<Int> cf_;               // continued fraction: prefix + repeating tail
    std::string text_;

    mutable std::mutex cache_mutex_;
    mutable std::vector<Enclosure> cache_;       // nested, shrinking
    mutable std::vector<Int> cf_expansion_;      // computed quotients (surd case)
    mutable Int cf_state_p_, cf_state_q_, cf_state_r_;  // surd cf iteration state
};

using AlphaRef = std::shared_ptr<const AlphaSpec>;

enum class Ordering { LT, EQ, GT };

class Scalar;
Ordering compare(const Scalar& a, const Scalar& b);

/// Exact number rat + coeff * alpha in the field Q + Q*alpha.
class Scalar {
public:
    Scalar() : rat_(0), coeff_(0) {}
    Scalar(const Rat& r) : rat_(r), coeff_(0) {}  // NOLINT: implicit by design
    Scalar(int n) : rat_(n), coeff_(0) {}         // NOLINT
    Scalar(Rat rat, Rat coeff, AlphaRef alpha);

    static Scalar alpha(const AlphaRef& spec) { return Scalar(0, 1, spec); }

    const Rat& rat() const { return rat_; }
    const Rat& coeff() const { return coeff_; }
    const AlphaRef& alpha_ref() const { return alpha_; }
    bool is_rational() const { return coeff_ == 0; }
    /// Rational value; throws when an alpha term is present.
    const Rat& as_rational() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const { return compare(*this, o) == Ordering::EQ; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool operator<(const Scalar& o) const { return compare(*this, o) == Ordering::LT; }
    bool operator<=(const Scalar& o) const { return compare(*this, o) != Ordering::GT; }
    bool operator>(const Scalar& o) const { return compare(*this, o) == Ordering::GT; }
    bool operator>=(const Scalar& o) const { return compare(*this, o) != Ordering::LT; }

    int sign() const;
    Scalar abs() const { return sign() < 0 ? -*this : *this; }
    bool is_zero() const { return rat_ == 0 && coeff_ == 0; }

    Int floor() const;
    /// Distance to the nearest integer.
    Scalar dist_to_int() const;

    /// Certified interval of width <= w around the value.
    Enclosure enclose(const Rat& w) const;

    std::string text() const;

private:
    AlphaRef merged_alpha(const Scalar& o) const;

    Rat rat_;
    Rat coeff_;
    AlphaRef alpha_;  // null iff coeff_ == 0
};

Ordering compare(const Scalar& a, const Scalar& b);

inline const Scalar& min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
inline const Scalar& max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

/// x^n for integer n (n may be negative when x != 0).
Rat rat_pow(const Rat& x, long n);

/// Exact n-th root of a non-negative rational, when one exists.
std::optional<Rat> exact_nth_root(const Rat& x, unsigned n);

/// Enclosure of x^(1/p) of width <= w, by monotone bisection.  Requires
/// x.lo >= 0 and p >= 1.
Enclosure p_root_enclose(const Enclosure& x, const Rat& p, const Rat& w);

}  // namespace lplat
