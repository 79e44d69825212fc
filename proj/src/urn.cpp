#include "pinstop/urn.hpp"
#include "pinstop/closed_form_a0.hpp"
#include "pinstop/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pinstop {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

void validate(const UrnSpec& u) {
    if (u.m < 1 || u.p < 1) throw DomainError("UrnSpec: m and p must be >= 1");
    if (!(u.prior >= 0.0 && u.prior <= 1.0))
        throw DomainError("UrnSpec: prior must lie in [0,1]");
}

// Classical table V(i,j) for 0 <= i <= mm, 0 <= j <= pp, exact rationals.
std::vector<cpp_rational> classical_table_rational(long long mm, long long pp) {
    const std::size_t cols = static_cast<std::size_t>(pp) + 1;
    std::vector<cpp_rational> v((mm + 1) * cols);
    for (long long j = 0; j <= pp; ++j) v[j] = j;
    for (long long i = 1; i <= mm; ++i) {
        v[i * cols] = 0;
        for (long long j = 1; j <= pp; ++j) {
            cpp_rational cont =
                (cpp_rational(i) * (v[(i - 1) * cols + j] - 1) +
                 cpp_rational(j) * (v[i * cols + j - 1] + 1)) /
                cpp_rational(i + j);
            v[i * cols + j] = cont > 0 ? cont : cpp_rational(0);
        }
    }
    return v;
}

double classical_value_double(long long mm, long long pp) {
    const std::size_t cols = static_cast<std::size_t>(pp) + 1;
    std::vector<double> v((mm + 1) * cols);
    for (long long j = 0; j <= pp; ++j) v[j] = static_cast<double>(j);
    for (long long i = 1; i <= mm; ++i) {
        v[i * cols] = 0.0;
        for (long long j = 1; j <= pp; ++j) {
            const double cont = (i * (v[(i - 1) * cols + j] - 1.0) +
                                 j * (v[i * cols + j - 1] + 1.0)) /
                                static_cast<double>(i + j);
            v[i * cols + j] = std::max(0.0, cont);
        }
    }
    return v[mm * cols + pp];
}

double log_falling(long long n, long long k) {
    // log of n (n-1) ... (n-k+1), requires k <= n
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

} // namespace

double shepp_value(long long m, long long p) {
    if (m < 0 || p < 0 || (m == 0 && p == 0))
        throw DomainError("shepp_value: requires m, p >= 0, not both 0");
    if (p == 0) return 0.0;
    if (m == 0) return static_cast<double>(p);
    if (m + p <= 200) {
        auto table = classical_table_rational(m, p);
        return static_cast<double>(table[m * (p + 1) + p]);
    }
    return classical_value_double(m, p);
}

long long shepp_threshold(long long p) {
    if (p < 1) throw DomainError("shepp_threshold: requires p >= 1");
    // V(m, p) is nonincreasing in m and hits exact 0; grow the rational table
    // row by row until it does.
    const std::size_t cols = static_cast<std::size_t>(p) + 1;
    std::vector<cpp_rational> prev(cols), cur(cols);
    for (long long j = 0; j <= p; ++j) prev[j] = j;
    for (long long m = 1;; ++m) {
        cur[0] = 0;
        for (long long j = 1; j <= p; ++j) {
            cpp_rational cont = (cpp_rational(m) * (prev[j] - 1) +
                                 cpp_rational(j) * (cur[j - 1] + 1)) /
                                cpp_rational(m + j);
            cur[j] = cont > 0 ? cont : cpp_rational(0);
        }
        if (cur[p] == 0) return m - 1;
        std::swap(prev, cur);
    }
}

UrnValueTable uncertain_urn_solve(const UrnSpec& u) {
    validate(u);
    const long long m = u.m, p = u.p;
    const long long N = m + p;
    const std::size_t n_states = static_cast<std::size_t>(N + 1) * (N + 2) / 2;

    UrnValueTable t;
    t.spec = u;
    t.horizon = static_cast<int>(N);
    t.values.assign(n_states, 0.0);
    t.posteriors.assign(n_states, 0.0);
    t.stop_flags.assign(n_states, 0);

    const bool exact = N <= 50;

    if (exact) {
        const cpp_rational pr(u.prior);
        std::vector<cpp_rational> post(n_states, 0), val(n_states, 0);

        for (long long n = 0; n <= N; ++n) {
            for (long long j = 0; j <= n; ++j) {
                const long long k = n - j;
                const std::size_t idx = UrnValueTable::index(static_cast<int>(j),
                                                             static_cast<int>(k));
                if (j > m || k > p) { post[idx] = 0; continue; }
                if (pr == 0) { post[idx] = 0; continue; }
                if (pr == 1) { post[idx] = 1; continue; }
                // without-replacement likelihood (m)_j (p)_k / (m+p)_n against
                // iid m^j p^k / (m+p)^n, order cancels
                cpp_int num = 1, den = 1;
                for (long long i = 0; i < j; ++i) num *= (m - i);
                for (long long i = 0; i < k; ++i) num *= (p - i);
                for (long long i = 0; i < n; ++i) num *= (m + p);
                for (long long i = 0; i < n; ++i) den *= (m + p - i);
                for (long long i = 0; i < j; ++i) den *= m;
                for (long long i = 0; i < k; ++i) den *= p;
                const cpp_rational odds = pr / (1 - pr) * cpp_rational(num, den);
                post[idx] = odds / (1 + odds);
            }
        }
        for (long long n = N; n >= 0; --n) {
            for (long long j = 0; j <= n; ++j) {
                const long long k = n - j;
                const std::size_t idx = UrnValueTable::index(static_cast<int>(j),
                                                             static_cast<int>(k));
                const cpp_rational stop_pay(k - j);
                if (n == N) {
                    val[idx] = stop_pay;
                    t.stop_flags[idx] = 1;
                    continue;
                }
                // predictive +1 probability: posterior mixture of the two branches
                const cpp_rational q =
                    post[idx] * cpp_rational(p - k, m + p - n) +
                    (1 - post[idx]) * cpp_rational(p, m + p);
                const std::size_t up = UrnValueTable::index(static_cast<int>(j),
                                                            static_cast<int>(k + 1));
                const std::size_t dn = UrnValueTable::index(static_cast<int>(j + 1),
                                                            static_cast<int>(k));
                const cpp_rational cont = q * val[up] + (1 - q) * val[dn];
                if (stop_pay >= cont) {
                    val[idx] = stop_pay;
                    t.stop_flags[idx] = 1;
                } else {
                    val[idx] = cont;
                }
            }
        }
        for (std::size_t i = 0; i < n_states; ++i) {
            t.values[i] = static_cast<double>(val[i]);
            t.posteriors[i] = static_cast<double>(post[i]);
        }
        return t;
    }

    // log-space posterior for large horizons
    const double log_mp = std::log(static_cast<double>(m + p));
    const double log_m = std::log(static_cast<double>(m));
    const double log_p = std::log(static_cast<double>(p));
    const bool prior0 = u.prior <= 0.0, prior1 = u.prior >= 1.0;
    const double log_prior_odds =
        prior0 || prior1 ? 0.0 : std::log(u.prior) - std::log1p(-u.prior);

    for (long long n = 0; n <= N; ++n) {
        for (long long j = 0; j <= n; ++j) {
            const long long k = n - j;
            const std::size_t idx =
                UrnValueTable::index(static_cast<int>(j), static_cast<int>(k));
            if (j > m || k > p || prior0) { t.posteriors[idx] = 0.0; continue; }
            if (prior1) { t.posteriors[idx] = 1.0; continue; }
            const double log_lr = log_falling(m, j) + log_falling(p, k) -
                                  log_falling(m + p, n) + n * log_mp -
                                  j * log_m - k * log_p;
            t.posteriors[idx] = 1.0 / (1.0 + std::exp(-(log_prior_odds + log_lr)));
        }
    }
    for (long long n = N; n >= 0; --n) {
        for (long long j = 0; j <= n; ++j) {
            const long long k = n - j;
            const std::size_t idx =
                UrnValueTable::index(static_cast<int>(j), static_cast<int>(k));
            const double stop_pay = static_cast<double>(k - j);
            if (n == N) {
                t.values[idx] = stop_pay;
                t.stop_flags[idx] = 1;
                continue;
            }
            const double post = t.posteriors[idx];
            const double q = post * static_cast<double>(p - k) /
                                 static_cast<double>(m + p - n) +
                             (1.0 - post) * static_cast<double>(p) /
                                 static_cast<double>(m + p);
            const double cont =
                q * t.values[UrnValueTable::index(static_cast<int>(j),
                                                  static_cast<int>(k + 1))] +
                (1.0 - q) * t.values[UrnValueTable::index(static_cast<int>(j + 1),
                                                          static_cast<int>(k))];
            if (stop_pay >= cont) {
                t.values[idx] = stop_pay;
                t.stop_flags[idx] = 1;
            } else {
                t.values[idx] = cont;
            }
        }
    }
    return t;
}

ScalingReport scaling_check(const std::vector<long long>& p_list, double prior) {
    if (p_list.empty()) throw DomainError("scaling_check: empty p_list");
    ScalingReport rep;
    rep.rows.reserve(p_list.size());
    const double target = value_a0(0.0, 0.0, prior).value;
    for (long long p : p_list) {
        const auto table = uncertain_urn_solve(UrnSpec{p, p, prior});
        const double scaled = table.value(0, 0) / std::sqrt(2.0 * static_cast<double>(p));
        rep.rows.push_back({p, scaled, target, std::fabs(scaled - target)});
    }
    rep.decreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (!(rep.rows[i].gap < rep.rows[i - 1].gap)) rep.decreasing = false;
    return rep;
}

} // namespace pinstop
