#include "kempner/bounds.hpp"

#include "kempner/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kempner {

namespace {

// (1 - lambda d)^2 / (2d), exact.
BigRat exponent_coefficient(std::uint32_t d, const BigRat& lambda) {
    const BigRat gap = BigRat(1) - lambda * BigInt(d);
    return gap * gap / BigRat(BigInt(2) * BigInt(d));
}

void require_regime(std::uint32_t d, const BigRat& lambda) {
    if (d < 2) throw std::invalid_argument("quotient bound d must be >= 2");
    if (lambda < 0) throw std::domain_error("lambda must be nonnegative");
    if (lambda * BigInt(d) >= 1)
        throw regime_error("lambda = " + to_string(lambda) + " is not below 1/d for d = " +
                           std::to_string(d) + "; these bounds need lambda < 1/d");
}

std::uint32_t require_family_regime(const LambdaFamily& fam) {
    const auto d = fam.sequence().bound();
    if (!d)
        throw regime_error("the sequence has no uniform quotient bound; declare one to use the "
                           "analytic bounds");
    require_regime(*d, fam.lambda());
    return *d;
}

void require_open_unit(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("delta must lie in the open interval (0,1)");
}

} // namespace

Interval markov_bound(double expectation, double b) {
    if (!(b > 0.0)) throw std::domain_error("Markov bound needs b > 0");
    if (!(expectation >= 0.0)) throw std::domain_error("Markov bound needs a nonnegative mean");
    return Interval::exact_double(expectation) / Interval::exact_double(b);
}

Interval chernoff_lower_tail(const ChernoffParams& params) {
    require_open_unit(params.delta);
    if (!(params.mu >= 0.0)) throw std::domain_error("mu must be nonnegative");
    if (params.p) {
        double sum = 0.0, comp = 0.0;
        for (const double pi : *params.p) {
            if (!(pi >= 0.0 && pi <= 1.0))
                throw std::invalid_argument("Bernoulli means must lie in [0,1]");
            const double y = pi - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        const double tol =
            16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(params.mu));
        if (std::abs(sum - params.mu) > tol)
            throw std::invalid_argument("mu does not equal the sum of the Bernoulli means");
    }
    const Interval mu = Interval::exact_double(params.mu);
    const Interval delta = Interval::exact_double(params.delta);
    return exp(-(mu * delta * delta / Interval::from_ui(2)));
}

Interval chernoff_lower_tail(const BigRat& mu, const BigRat& delta) {
    if (delta <= 0 || delta >= 1)
        throw std::domain_error("delta must lie in the open interval (0,1)");
    if (mu < 0) throw std::domain_error("mu must be nonnegative");
    const BigRat exponent = mu * delta * delta / 2;
    return exp(-Interval::from_rational(exponent));
}

Interval chernoff_h(double delta) {
    require_open_unit(delta);
    const Interval one = Interval::from_ui(1);
    const Interval x = Interval::exact_double(delta);
    const Interval t = one - x;
    return t * log(t) + x - x * x / Interval::from_ui(2);
}

BigRat d_star(const LambdaFamily& fam, std::size_t m) {
    if (m == 0) throw std::domain_error("level m must be >= 1");
    BigRat inv = 0;
    for (std::size_t i = 0; i < m; ++i)
        inv += BigRat(BigInt(static_cast<std::uint64_t>(fam.forbidden().size_at(i))),
                      BigInt(fam.sequence().quotient(i)));
    return BigRat(BigInt(static_cast<std::uint64_t>(m))) / inv;
}

BigRat chernoff_delta(const LambdaFamily& fam, std::size_t m) {
    const BigRat ds = d_star(fam, m);
    const BigRat product = fam.lambda() * ds;
    if (product >= 1)
        throw regime_error("lambda * d_m* = " + to_string(product) +
                           " is not below 1; no positive Chernoff delta exists here");
    return BigRat(1) - product;
}

Interval level_count_bound(const LambdaFamily& fam, std::size_t m) {
    if (m == 0) throw std::domain_error("level m must be >= 1");
    const std::uint32_t d = require_family_regime(fam);
    const BigRat exponent =
        exponent_coefficient(d, fam.lambda()) * BigInt(static_cast<std::uint64_t>(m));
    return exp(-Interval::from_rational(exponent)) * Interval::from_bigint(fam.sequence().base(m));
}

Interval abscissa_bound(std::uint32_t d, const BigRat& lambda) {
    require_regime(d, lambda);
    const Interval c = Interval::from_rational(exponent_coefficient(d, lambda));
    return Interval::from_ui(1) - c / log(Interval::from_ui(d));
}

SigmaWindow sigma_window(std::uint32_t d, const BigRat& lambda) {
    return {abscissa_bound(d, lambda), 1.0};
}

Interval geometric_ratio(std::uint32_t d, const BigRat& lambda, double sigma) {
    require_regime(d, lambda);
    const Interval decay = exp(-Interval::from_rational(exponent_coefficient(d, lambda)));
    if (sigma == 1.0) return decay;
    return pow(Interval::from_ui(d), Interval::exact_double(1.0 - sigma)) * decay;
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Converges: return "converges";
    case Verdict::Diverges: return "diverges";
    default: return "inconclusive";
    }
}

namespace {

// Three-tier comparison of I(k) against its threshold: double arithmetic
// with a wide safety margin, then directed intervals, then exact integer
// powers. The exact tier settles genuine ties such as I(k) equal to
// (1 - delta) log k / log d at a power of d.
class CriterionEvaluator {
public:
    CriterionEvaluator(std::uint32_t d, const BigRat& delta)
        : d_(d), p_(rat_num(delta)), q_(rat_den(delta)), delta_d_(delta.convert_to<double>()),
          log_conv_base_(std::log(d / (d - 1.0))), log_d_(std::log(static_cast<double>(d))) {}

    double conv_threshold(std::uint64_t k) const {
        return (1.0 + delta_d_) * std::log(static_cast<double>(k)) / log_conv_base_;
    }
    double div_threshold(std::uint64_t k) const {
        return (1.0 - delta_d_) * std::log(static_cast<double>(k)) / log_d_;
    }

    // I(k) >= (1 + delta) ln k / ln(d/(d-1))
    bool conv_holds(std::uint64_t k, std::uint64_t c) const {
        const double thr = conv_threshold(k);
        const double margin = 1e-8 * (std::abs(thr) + static_cast<double>(c) + 1.0);
        if (static_cast<double>(c) > thr + margin) return true;
        if (static_cast<double>(c) < thr - margin) return false;
        const Interval thr_iv = (Interval::from_ui(1) + delta_iv()) * log_k(k) /
                                (log(Interval::from_ui(d_)) - log(Interval::from_ui(d_ - 1)));
        const Interval c_iv = Interval::from_ui(static_cast<unsigned long>(c));
        if (strictly_less(thr_iv, c_iv)) return true;
        if (strictly_less(c_iv, thr_iv)) return false;
        // d^{cq} >= k^{q+p} (d-1)^{cq}
        const unsigned cq = power_exponent(BigInt(c) * q_);
        const unsigned kp = power_exponent(q_ + p_);
        using boost::multiprecision::pow;
        return pow(BigInt(d_), cq) >= pow(BigInt(k), kp) * pow(BigInt(d_ - 1), cq);
    }

    // I(k) <= (1 - delta) ln k / ln d
    bool div_holds(std::uint64_t k, std::uint64_t c) const {
        const double thr = div_threshold(k);
        const double margin = 1e-8 * (std::abs(thr) + static_cast<double>(c) + 1.0);
        if (static_cast<double>(c) < thr - margin) return true;
        if (static_cast<double>(c) > thr + margin) return false;
        const Interval thr_iv =
            (Interval::from_ui(1) - delta_iv()) * log_k(k) / log(Interval::from_ui(d_));
        const Interval c_iv = Interval::from_ui(static_cast<unsigned long>(c));
        if (strictly_less(c_iv, thr_iv)) return true;
        if (strictly_less(thr_iv, c_iv)) return false;
        // d^{cq} <= k^{q-p}
        const unsigned cq = power_exponent(BigInt(c) * q_);
        const unsigned kp = power_exponent(q_ - p_);
        using boost::multiprecision::pow;
        return pow(BigInt(d_), cq) <= pow(BigInt(k), kp);
    }

private:
    Interval delta_iv() const { return Interval::from_rational(BigRat(p_, q_)); }
    static Interval log_k(std::uint64_t k) { return log(Interval::from_ui(k)); }
    static unsigned power_exponent(const BigInt& e) {
        if (e < 0 || e > 100'000'000)
            throw resource_error("criterion tie-break needs an integer power with exponent " +
                                 to_string(e) + ", beyond the supported budget");
        return e.convert_to<unsigned>();
    }

    std::uint32_t d_;
    BigInt p_, q_;
    double delta_d_;
    double log_conv_base_;
    double log_d_;
};

std::vector<std::uint64_t> stretch_starts(const IndexSet& index, std::uint64_t k_lo,
                                          std::uint64_t k_hi) {
    std::vector<std::uint64_t> starts{k_lo};
    if (index.is_finite()) {
        for (const auto e : index.elements())
            if (e > k_lo && e <= k_hi) starts.push_back(e);
        return starts;
    }
    const std::uint64_t first = index.first(), step = index.step();
    std::uint64_t e = first > k_lo ? first : first + ((k_lo - first) / step + 1) * step;
    if (e <= k_hi) {
        const std::uint64_t jumps = (k_hi - e) / step + 1;
        if (jumps > 20'000'000)
            throw resource_error("criterion range spans " + std::to_string(jumps) +
                                 " index jumps; shrink the k range (budget 2e7)");
        for (;;) {
            starts.push_back(e);
            if (k_hi - e < step) break;
            e += step;
        }
    }
    return starts;
}

} // namespace

CriterionVerdict criterion_check(const IndexedFamily& fam, std::uint32_t d, const BigRat& delta,
                                 std::uint64_t k_lo, std::uint64_t k_hi) {
    if (d < 2) throw std::invalid_argument("quotient bound d must be >= 2");
    for (const auto q : fam.sequence().stored_quotients())
        if (q > d)
            throw std::invalid_argument("d = " + std::to_string(d) +
                                        " does not dominate the quotient " + std::to_string(q));
    if (delta <= 0 || delta >= 1)
        throw std::domain_error("delta must lie in the open interval (0,1)");
    if (k_lo < 1 || k_lo > k_hi)
        throw std::invalid_argument("the k range must satisfy 1 <= k_lo <= k_hi");

    const CriterionEvaluator eval(d, delta);
    const IndexSet& index = fam.index();
    const auto starts = stretch_starts(index, k_lo, k_hi);

    // Within a stretch of constant I(k) both thresholds increase with k, so
    // the convergence inequality can only fail at the tail of a stretch
    // (check its end) and the divergence inequality only at the head (check
    // its start).
    bool conv_failed = false, div_failed = false;
    std::uint64_t conv_last_fail = 0;
    std::uint64_t div_fail_a = 0, div_fail_b = 0, div_fail_c = 0;
    for (std::size_t t = 0; t < starts.size(); ++t) {
        const std::uint64_t a = starts[t];
        const std::uint64_t b = t + 1 < starts.size() ? starts[t + 1] - 1 : k_hi;
        const std::uint64_t c = index.count_upto(a);
        if (!eval.conv_holds(b, c)) {
            conv_failed = true;
            conv_last_fail = b;
        }
        if (!eval.div_holds(a, c)) {
            div_failed = true;
            div_fail_a = a;
            div_fail_b = b;
            div_fail_c = c;
        }
    }

    CriterionVerdict out;
    out.delta = delta;
    out.k_lo = k_lo;
    out.k_hi = k_hi;
    const std::uint64_t c_lo = index.count_upto(k_lo);
    const std::uint64_t c_hi = index.count_upto(k_hi);
    out.at_min = {k_lo,
                  c_lo,
                  eval.conv_threshold(k_lo),
                  eval.div_threshold(k_lo),
                  eval.conv_holds(k_lo, c_lo),
                  eval.div_holds(k_lo, c_lo)};
    out.at_max = {k_hi,
                  c_hi,
                  eval.conv_threshold(k_hi),
                  eval.div_threshold(k_hi),
                  eval.conv_holds(k_hi, c_hi),
                  eval.div_holds(k_hi, c_hi)};

    if (out.at_max.conv_holds) {
        out.verdict = Verdict::Converges;
        out.k_threshold = conv_failed ? conv_last_fail + 1 : k_lo;
        return out;
    }
    if (out.at_max.div_holds) {
        out.verdict = Verdict::Diverges;
        if (!div_failed) {
            out.k_threshold = k_lo;
        } else if (!eval.div_holds(div_fail_b, div_fail_c)) {
            out.k_threshold = div_fail_b + 1;
        } else {
            // Largest failing k inside [div_fail_a, div_fail_b]: the
            // inequality is monotone in k on the stretch, so bisect.
            std::uint64_t lo = div_fail_a, hi = div_fail_b;
            while (hi - lo > 1) {
                const std::uint64_t mid = lo + (hi - lo) / 2;
                if (eval.div_holds(mid, div_fail_c))
                    hi = mid;
                else
                    lo = mid;
            }
            out.k_threshold = lo + 1;
        }
        return out;
    }
    out.verdict = Verdict::Inconclusive;
    out.k_threshold = 0;
    return out;
}

} // namespace kempner
