#include "spaceform/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace spaceform {

Rational rational_from_string(const std::string& text) {
    std::string s = text;
    // Trim spaces; GMP is strict about them.
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        // Decimal literal: shift the point into an explicit denominator.
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac_len = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw std::invalid_argument("bad rational literal: " + text);
        mpz_class num(digits, 10);
        mpz_class den(1);
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        Rational r(num, den);
        r.canonicalize();
        return r;
    }

    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + text);
    if (r.get_den() == 0) throw std::invalid_argument("rational with zero denominator: " + text);
    r.canonicalize();
    return r;
}

std::string rational_to_string(const Rational& r) {
    return r.get_str();
}

bool fits_long(const Rational& r) {
    return r.get_num().fits_slong_p() && r.get_den().fits_slong_p();
}

long rational_num_long(const Rational& r) {
    if (!r.get_num().fits_slong_p()) throw std::overflow_error("rational numerator exceeds long");
    return r.get_num().get_si();
}

long rational_den_long(const Rational& r) {
    if (!r.get_den().fits_slong_p()) throw std::overflow_error("rational denominator exceeds long");
    return r.get_den().get_si();
}

bool is_rational_square(const Rational& r) {
    if (sgn(r) < 0) return false;
    return mpz_perfect_square_p(r.get_num().get_mpz_t()) != 0 &&
           mpz_perfect_square_p(r.get_den().get_mpz_t()) != 0;
}

Rational rational_sqrt(const Rational& r) {
    if (!is_rational_square(r)) throw std::domain_error("rational_sqrt of a non-square");
    mpz_class num, den;
    mpz_sqrt(num.get_mpz_t(), r.get_num().get_mpz_t());
    mpz_sqrt(den.get_mpz_t(), r.get_den().get_mpz_t());
    return Rational(num, den);
}

std::optional<Rational> rationalize(double x, long max_denominator, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    if (max_denominator < 1) return std::nullopt;

    // Continued-fraction convergents p_k/q_k of x.
    double v = x;
    long long p_prev = 1, q_prev = 0;
    long long p_cur = static_cast<long long>(std::floor(v));
    long long q_cur = 1;
    auto check = [&](long long p, long long q) -> std::optional<Rational> {
        if (q < 1 || q > max_denominator) return std::nullopt;
        double approx = static_cast<double>(p) / static_cast<double>(q);
        if (std::abs(x - approx) <= tol) return make_rational(p, q);
        return std::nullopt;
    };
    if (auto r = check(p_cur, q_cur)) return r;

    for (int iter = 0; iter < 64; ++iter) {
        double frac = v - std::floor(v);
        if (frac < 1e-18) break;
        v = 1.0 / frac;
        if (!std::isfinite(v) || v > 9.0e18) break;
        long long a = static_cast<long long>(std::floor(v));
        long long p_next = a * p_cur + p_prev;
        long long q_next = a * q_cur + q_prev;
        if (q_next > max_denominator || q_next < 0) {
            // The largest admissible semiconvergent may still qualify.
            long long k = (max_denominator - q_prev) / q_cur;
            if (k >= 1) {
                if (auto r = check(k * p_cur + p_prev, k * q_cur + q_prev)) return r;
            }
            break;
        }
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        if (auto r = check(p_cur, q_cur)) return r;
    }
    return std::nullopt;
}

}  // namespace spaceform
