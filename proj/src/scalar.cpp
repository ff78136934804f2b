#include "lplat/scalar.hpp"

#include <sstream>
#include <utility>

namespace lplat {

namespace {

Int floor_div(const Int& a, const Int& b) {
    // b > 0
    Int q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

Int rat_floor(const Rat& x) {
    return floor_div(numerator(x), denominator(x));
}

Int isqrt_floor(const Int& n) {
    return boost::multiprecision::sqrt(n);
}

bool is_square(const Int& n) {
    if (n < 0) return false;
    Int s = isqrt_floor(n);
    return s * s == n;
}

}  // namespace

Enclosure Enclosure::operator*(const Enclosure& o) const {
    Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    Rat mn = std::min(std::min(a, b), std::min(c, d));
    Rat mx = std::max(std::max(a, b), std::max(c, d));
    return {mn, mx};
}

Enclosure min(const Enclosure& a, const Enclosure& b) {
    return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Enclosure max(const Enclosure& a, const Enclosure& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// ---------------------------------------------------------------------------
// AlphaSpec

std::shared_ptr<const AlphaSpec> AlphaSpec::surd(Int p, Int q, Int d, Int r) {
    if (r == 0) throw error("surd: zero denominator");
    if (q == 0) throw error("surd: q = 0 gives a rational, not an irrational");
    if (d <= 0 || is_square(d)) throw error("surd: d must be a positive non-square");
    if (r < 0) { r = -r; p = -p; q = -q; }
    Int g = gcd(gcd(abs(p), abs(q)), r);
    if (g > 1) { p /= g; q /= g; r /= g; }
    auto spec = std::shared_ptr<AlphaSpec>(new AlphaSpec());
    spec->kind_ = Kind::Surd;
    spec->p_ = p; spec->q_ = q; spec->d_ = d; spec->r_ = r;
    std::ostringstream os;
    os << "surd(" << p << "," << q << "," << d << "," << r << ")";
    spec->text_ = os.str();
    return spec;
}

std::shared_ptr<const AlphaSpec> AlphaSpec::continued_fraction(std::vector<Int> quotients) {
    if (quotients.size() < 2) throw error("cf: need a0 and at least one repeating quotient");
    for (std::size_t i = 1; i < quotients.size(); ++i)
        if (quotients[i] < 1) throw error("cf: partial quotients a1,a2,... must be >= 1");
    auto spec = std::shared_ptr<AlphaSpec>(new AlphaSpec());
    spec->kind_ = Kind::CF;
    spec->cf_ = std::move(quotients);
    std::ostringstream os;
    os << "cf(" << spec->cf_[0] << ";";
    for (std::size_t i = 1; i < spec->cf_.size(); ++i) {
        if (i > 1) os << ",";
        os << spec->cf_[i];
    }
    os << ")";
    spec->text_ = os.str();
    return spec;
}

std::shared_ptr<const AlphaSpec> AlphaSpec::golden() {
    return surd(-1, 1, 5, 2);
}

Int AlphaSpec::partial_quotient(std::size_t i) const {
    if (kind_ == Kind::CF) {
        if (i == 0) return cf_[0];
        std::size_t period = cf_.size() - 1;
        return cf_[1 + (i - 1) % period];
    }
    // Surd case: expand (P + sqrt(D))/Q on demand (PQa iteration).
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (cf_expansion_.empty()) {
        // (p + q*sqrt(d))/r = (P + sqrt(D))/Q with D = q^2 d, assuming q > 0;
        // for q < 0, flip to -((-p) + sqrt(D))/r handled by the general step.
        Int P = p_, Q = r_, D = q_ * q_ * d_;
        if (q_ < 0) {
            // (p - sqrt(D'))/r with D' = q^2 d: multiply by -1/-1.
            P = -p_; Q = -r_;
        }
        if ((D - P * P) % Q != 0) {
            Int a = abs(Q);
            P *= a; D *= a * a; Q *= a;
        }
        cf_state_p_ = P; cf_state_q_ = Q; cf_state_r_ = D;
    }
    while (cf_expansion_.size() <= i) {
        Int P = cf_state_p_, Q = cf_state_q_, D = cf_state_r_;
        Int s = isqrt_floor(D);
        Int a = Q > 0 ? floor_div(P + s, Q) : floor_div(P + s + 1, Q);
        cf_expansion_.push_back(a);
        Int Pn = a * Q - P;
        Int Qn = (D - Pn * Pn) / Q;
        cf_state_p_ = Pn; cf_state_q_ = Qn;
    }
    return cf_expansion_[i];
}

std::pair<Int, Int> AlphaSpec::convergent(std::size_t i) const {
    Int h0 = 1, h1 = partial_quotient(0);
    Int k0 = 0, k1 = 1;
    for (std::size_t j = 1; j <= i; ++j) {
        Int a = partial_quotient(j);
        Int h2 = a * h1 + h0;
        Int k2 = a * k1 + k0;
        h0 = h1; h1 = h2;
        k0 = k1; k1 = k2;
    }
    return {h1, k1};
}

Enclosure AlphaSpec::refine_to(const Rat& w) const {
    if (kind_ == Kind::CF) {
        std::size_t i = 1;
        auto [h0, k0] = convergent(0);
        auto [h1, k1] = convergent(1);
        while (Rat(1, 1) / (Rat(k0) * Rat(k1)) > w) {
            ++i;
            h0 = h1; k0 = k1;
            std::tie(h1, k1) = convergent(i);
        }
        Rat a = Rat(h0) / Rat(k0), b = Rat(h1) / Rat(k1);
        return a <= b ? Enclosure{a, b} : Enclosure{b, a};
    }
    // Surd: expand outward then bisect; cmp_with_rational is exact here.
    Rat lo = -1, hi = 1;
    while (cmp_with_rational(hi) > 0) { lo = hi; hi *= 2; }
    while (cmp_with_rational(lo) < 0) { hi = lo; lo *= 2; }
    while (hi - lo > w) {
        Rat mid = (lo + hi) / 2;
        if (cmp_with_rational(mid) > 0) lo = mid; else hi = mid;
    }
    return {lo, hi};
}

Enclosure AlphaSpec::enclose(const Rat& w) const {
    if (w <= 0) throw error("enclose: width must be positive");
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        for (auto it = cache_.rbegin(); it != cache_.rend(); ++it)
            if (it->width() <= w) return *it;
    }
    Enclosure e = refine_to(w);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (!cache_.empty()) {
        // keep the cache nested
        e = Enclosure{std::max(e.lo, cache_.back().lo), std::min(e.hi, cache_.back().hi)};
    }
    cache_.push_back(e);
    return e;
}

int AlphaSpec::cmp_with_rational(const Rat& x) const {
    if (kind_ == Kind::Surd) {
        // sign of (p + q*sqrt(d))/r - x, with r > 0:
        // q*sqrt(d) vs x*r - p
        Rat t = x * Rat(r_) - Rat(p_);
        Rat qr(q_);
        if (qr > 0) {
            if (t < 0) return 1;
            // sqrt(d) vs t/q  <=>  d vs (t/q)^2
            Rat u = t / qr;
            Rat u2 = u * u;
            if (Rat(d_) > u2) return 1;
            if (Rat(d_) < u2) return -1;
            throw error("surd: d is a perfect rational square");  // excluded at construction
        }
        if (t > 0) return -1;
        Rat u = t / qr;  // >= 0
        Rat u2 = u * u;
        if (Rat(d_) < u2) return 1;
        if (Rat(d_) > u2) return -1;
        throw error("surd: d is a perfect rational square");
    }
    // CF: refine until x falls outside; terminates since the value is irrational.
    Rat w(1);
    while (true) {
        Enclosure e = enclose(w);
        if (x < e.lo) return 1;
        if (x > e.hi) return -1;
        w /= 2;
    }
}

std::optional<std::pair<Rat, Rat>> AlphaSpec::square_decomposition() const {
    if (kind_ != Kind::Surd) return std::nullopt;
    // alpha = (p + q sqrt(d))/r  =>  alpha^2 = (q^2 d - p^2)/r^2 + (2p/r) alpha
    Rat a = Rat(q_ * q_ * d_ - p_ * p_) / Rat(r_ * r_);
    Rat b = Rat(2 * p_) / Rat(r_);
    return std::make_pair(a, b);
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(Rat rat, Rat coeff, AlphaRef alpha)
    : rat_(std::move(rat)), coeff_(std::move(coeff)), alpha_(std::move(alpha)) {
    if (coeff_ != 0 && !alpha_) throw error("Scalar: alpha coefficient without an AlphaSpec");
    if (coeff_ == 0) alpha_.reset();
}

const Rat& Scalar::as_rational() const {
    if (coeff_ != 0) throw error("Scalar: not a rational (has an alpha term)");
    return rat_;
}

AlphaRef Scalar::merged_alpha(const Scalar& o) const {
    if (alpha_ && o.alpha_ && !alpha_->same(*o.alpha_))
        throw error("Scalar: mixed incompatible AlphaSpecs (" + alpha_->text() + " vs " +
                    o.alpha_->text() + ")");
    return alpha_ ? alpha_ : o.alpha_;
}

Scalar Scalar::operator+(const Scalar& o) const {
    return Scalar(rat_ + o.rat_, coeff_ + o.coeff_, merged_alpha(o));
}

Scalar Scalar::operator-(const Scalar& o) const {
    return Scalar(rat_ - o.rat_, coeff_ - o.coeff_, merged_alpha(o));
}

Scalar Scalar::operator-() const { return Scalar(-rat_, -coeff_, alpha_); }

Scalar Scalar::operator*(const Scalar& o) const {
    if (o.coeff_ == 0) return Scalar(rat_ * o.rat_, coeff_ * o.rat_, alpha_);
    if (coeff_ == 0) return o * *this;
    AlphaRef a = merged_alpha(o);
    auto sq = a->square_decomposition();
    if (!sq) throw error("Scalar: product of two alpha terms needs a quadratic alpha");
    // (r1 + c1 a)(r2 + c2 a), a^2 = A + B a
    const auto& [A, B] = *sq;
    Rat r = rat_ * o.rat_ + coeff_ * o.coeff_ * A;
    Rat c = rat_ * o.coeff_ + coeff_ * o.rat_ + coeff_ * o.coeff_ * B;
    return Scalar(r, c, a);
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (o.is_zero()) throw error("Scalar: division by zero");
    if (o.coeff_ == 0) return Scalar(rat_ / o.rat_, coeff_ / o.rat_, alpha_);
    auto sq = o.alpha_->square_decomposition();
    if (!sq) throw error("Scalar: division by an alpha term needs a quadratic alpha");
    // Invert x = r + c a with a^2 = A + B a: solve (r + c a)(u + v a) = 1.
    const auto& [A, B] = *sq;
    Rat det = o.rat_ * (o.rat_ + o.coeff_ * B) - o.coeff_ * o.coeff_ * A;
    if (det == 0) throw error("Scalar: singular division");
    Rat u = (o.rat_ + o.coeff_ * B) / det;
    Rat v = -o.coeff_ / det;
    return *this * Scalar(u, v, o.alpha_);
}

int Scalar::sign() const {
    if (coeff_ == 0) return rat_ == 0 ? 0 : (rat_ > 0 ? 1 : -1);
    // rat + coeff*alpha = coeff * (alpha - (-rat/coeff)); alpha irrational => never 0
    int c = alpha_->cmp_with_rational(-rat_ / coeff_);
    return coeff_ > 0 ? c : -c;
}

Int Scalar::floor() const {
    if (coeff_ == 0) return rat_floor(rat_);
    Rat w(1);
    while (true) {
        Enclosure e = enclose(w);
        Int flo = rat_floor(e.lo), fhi = rat_floor(e.hi);
        if (flo == fhi) return flo;
        w /= 2;  // value irrational, so the enclosure leaves the integer eventually
    }
}

Scalar Scalar::dist_to_int() const {
    Scalar frac = *this - Scalar(Rat(floor()));
    Scalar other = Scalar(Rat(1)) - frac;
    return min(frac, other);
}

Enclosure Scalar::enclose(const Rat& w) const {
    if (w <= 0) throw error("enclose: width must be positive");
    if (coeff_ == 0) return Enclosure(rat_);
    Enclosure base = alpha_->enclose(w / boost::multiprecision::abs(coeff_));
    Enclosure scaled = base * coeff_;
    return {scaled.lo + rat_, scaled.hi + rat_};
}

namespace {
void print_rat(std::ostream& os, const Rat& r) {
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
}
}  // namespace

std::string Scalar::text() const {
    std::ostringstream os;
    print_rat(os, rat_);
    if (coeff_ != 0) {
        os << (coeff_ > 0 ? "+" : "-");
        print_rat(os, boost::multiprecision::abs(coeff_));
        os << "*alpha";
    }
    return os.str();
}

Ordering compare(const Scalar& a, const Scalar& b) {
    int s = (a - b).sign();
    return s < 0 ? Ordering::LT : (s == 0 ? Ordering::EQ : Ordering::GT);
}

// ---------------------------------------------------------------------------
// Rational powers and roots

Rat rat_pow(const Rat& x, long n) {
    if (n == 0) return 1;
    if (n < 0) {
        if (x == 0) throw error("rat_pow: zero to a negative power");
        return Rat(1) / rat_pow(x, -n);
    }
    Rat acc(1), base(x);
    unsigned long e = static_cast<unsigned long>(n);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

namespace {
std::optional<Int> exact_int_root(const Int& x, unsigned n) {
    if (x < 0) return std::nullopt;
    if (x == 0 || x == 1) return x;
    // Newton floor root, then exactness check.
    Int lo = 1, hi = x;
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        Int p = 1;
        bool over = false;
        for (unsigned i = 0; i < n; ++i) {
            p *= mid;
            if (p > x) { over = true; break; }
        }
        if (over) hi = mid - 1; else lo = mid;
    }
    Int p = 1;
    for (unsigned i = 0; i < n; ++i) p *= lo;
    if (p == x) return lo;
    return std::nullopt;
}
}  // namespace

std::optional<Rat> exact_nth_root(const Rat& x, unsigned n) {
    if (x < 0 || n == 0) return std::nullopt;
    auto num = exact_int_root(numerator(x), n);
    if (!num) return std::nullopt;
    auto den = exact_int_root(denominator(x), n);
    if (!den) return std::nullopt;
    return Rat(*num) / Rat(*den);
}

namespace {
// Enclosure of v^(b/a) for v >= 0, where p = a/b >= 1, i.e. the root
// t with t^a = v^b, to width w.
Enclosure root_of_rational(const Rat& v, const Int& a, const Int& b, const Rat& w) {
    if (v == 0) return Enclosure(Rat(0));
    unsigned ai = a.convert_to<unsigned>();
    long bi = b.convert_to<long>();
    Rat vb = rat_pow(v, bi);
    if (auto exact = exact_nth_root(vb, ai)) return Enclosure(*exact);
    Rat lo = std::min(Rat(1), vb), hi = std::max(Rat(1), vb);
    while (hi - lo > w) {
        Rat mid = (lo + hi) / 2;
        if (rat_pow(mid, static_cast<long>(ai)) <= vb) lo = mid; else hi = mid;
    }
    return {lo, hi};
}
}  // namespace

Enclosure p_root_enclose(const Enclosure& x, const Rat& p, const Rat& w) {
    if (x.lo < 0) throw error("p_root_enclose: negative input");
    if (p < 1) throw error("p_root_enclose: p must be >= 1");
    if (w <= 0) throw error("p_root_enclose: width must be positive");
    Int a = numerator(p), b = denominator(p);
    Enclosure lo_root = root_of_rational(x.lo, a, b, w / 2);
    if (x.is_point()) return lo_root;
    Enclosure hi_root = root_of_rational(x.hi, a, b, w / 2);
    return {lo_root.lo, hi_root.hi};
}

}  // namespace lplat
