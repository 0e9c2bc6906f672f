#pragma once

#include "heckelab/rational.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace heckelab {

// Exact Laurent polynomial in t = q^{1/2} over the rationals.  Stored sparse
// with no zero coefficients; all arithmetic is exact.  Every Hecke parameter
// (q_s, q_w, p_a, q_alpha, ...) lives here, so exponents of q in (1/2)Z are
// integer exponents of t.
class Scalar {
public:
    Scalar() = default;
    Scalar(long n)
    {
        if (n != 0)
            coeff_[0] = Rat(n);
    }
    explicit Scalar(const Rat& r)
    {
        if (r != 0)
            coeff_[0] = r;
    }

    static Scalar t_pow(long k, const Rat& c = Rat(1))
    {
        Scalar s;
        if (c != 0)
            s.coeff_[k] = c;
        return s;
    }
    // q^k = t^{2k}
    static Scalar q_pow(long k, const Rat& c = Rat(1)) { return t_pow(2 * k, c); }

    bool is_zero() const { return coeff_.empty(); }
    bool is_one() const { return coeff_.size() == 1 && coeff_.begin()->first == 0 && coeff_.begin()->second == 1; }
    bool is_monomial() const { return coeff_.size() == 1; }
    // t-exponent of a monomial.
    long exponent() const
    {
        if (!is_monomial())
            throw Error(Errc::BadInput, "exponent() on non-monomial scalar");
        return coeff_.begin()->first;
    }
    const Rat& lead_coeff() const
    {
        if (coeff_.empty())
            throw Error(Errc::BadInput, "lead_coeff() of zero");
        return coeff_.rbegin()->second;
    }
    long degree() const
    {
        if (coeff_.empty())
            throw Error(Errc::BadInput, "degree of zero");
        return coeff_.rbegin()->first;
    }
    long low_degree() const
    {
        if (coeff_.empty())
            throw Error(Errc::BadInput, "low degree of zero");
        return coeff_.begin()->first;
    }

    const std::map<long, Rat>& terms() const { return coeff_; }

    Rat coeff(long k) const
    {
        auto it = coeff_.find(k);
        return it == coeff_.end() ? Rat(0) : it->second;
    }

    void add_term(long k, const Rat& c)
    {
        if (c == 0)
            return;
        auto it = coeff_.find(k);
        if (it == coeff_.end()) {
            coeff_[k] = c;
        } else {
            it->second += c;
            if (it->second == 0)
                coeff_.erase(it);
        }
    }

    Scalar& operator+=(const Scalar& o)
    {
        for (const auto& [k, c] : o.coeff_)
            add_term(k, c);
        return *this;
    }
    Scalar& operator-=(const Scalar& o)
    {
        for (const auto& [k, c] : o.coeff_)
            add_term(k, -c);
        return *this;
    }
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator-(const Scalar& a)
    {
        Scalar r;
        for (const auto& [k, c] : a.coeff_)
            r.coeff_[k] = -c;
        return r;
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b)
    {
        Scalar r;
        for (const auto& [ka, ca] : a.coeff_)
            for (const auto& [kb, cb] : b.coeff_)
                r.add_term(ka + kb, ca * cb);
        return r;
    }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.coeff_ == b.coeff_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    friend bool operator<(const Scalar& a, const Scalar& b) { return a.coeff_ < b.coeff_; }

    // Multiplicative inverse; defined exactly when the scalar is a monomial.
    Scalar inverse() const
    {
        if (is_zero())
            throw Error(Errc::DivByZero, "inverse of zero scalar");
        if (!is_monomial())
            throw Error(Errc::NonDivisible, "inverse of non-monomial scalar");
        return t_pow(-coeff_.begin()->first, Rat(1) / coeff_.begin()->second);
    }

    std::string to_string() const { return render(false); }
    std::string to_string_q() const { return render(true); }

    // Exponents descending; q-mode prints even t-exponents as q^k and odd
    // ones as q^(k/2).
    std::string render(bool q_mode) const
    {
        if (coeff_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) {
            Rat c = it->second;
            long k = it->first;
            bool neg = c < 0;
            if (first) {
                if (neg)
                    out += "-";
            } else {
                out += neg ? " - " : " + ";
            }
            first = false;
            Rat ac = neg ? Rat(-c) : c;
            std::string var;
            if (k != 0) {
                if (q_mode) {
                    if (k % 2 == 0)
                        var = "q^" + std::to_string(k / 2);
                    else
                        var = "q^(" + std::to_string(k) + "/2)";
                } else {
                    var = k == 1 ? "t" : "t^" + std::to_string(k);
                }
            }
            if (var.empty())
                out += rat_to_string(ac);
            else if (ac == 1)
                out += var;
            else
                out += rat_to_string(ac) + "*" + var;
        }
        return out;
    }

private:
    std::map<long, Rat> coeff_;
};

// Exact division in the Laurent ring: returns quotient with q*den == num,
// throws NonDivisible otherwise.  A NonDivisible here signals a violated
// polynomiality precondition upstream.
inline Scalar exact_div(const Scalar& num, const Scalar& den)
{
    if (den.is_zero())
        throw Error(Errc::DivByZero, "scalar division by zero");
    if (num.is_zero())
        return Scalar();
    // Long division from the top.  When num = q*den the lowest terms multiply
    // without cancellation, so low(q) = low(num) - low(den); once the working
    // remainder drops below that bound the division cannot close.
    Scalar rem = num;
    Scalar quot;
    long dd = den.degree();
    long qlow = num.low_degree() - den.low_degree();
    const Rat& dl = den.lead_coeff();
    while (!rem.is_zero() && rem.degree() - dd >= qlow) {
        Scalar m = Scalar::t_pow(rem.degree() - dd, rem.lead_coeff() / dl);
        quot += m;
        rem -= m * den;
    }
    if (!rem.is_zero())
        throw Error(Errc::NonDivisible, num.to_string() + " not divisible by " + den.to_string());
    return quot;
}

inline bool divides(const Scalar& den, const Scalar& num)
{
    try {
        exact_div(num, den);
        return true;
    } catch (const Error& e) {
        if (e.code() == Errc::NonDivisible)
            return false;
        throw;
    }
}

namespace detail {

// Minimal recursive-descent parser for scalar expressions:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := ['-'] atom ['^' exp]
//   atom   := rational | 'q' | 't' | '(' expr ')'
//   exp    := ['-'] integer | '(' ['-'] integer '/' '2' ')'
struct ScalarParser {
    const std::string& s;
    size_t pos = 0;

    explicit ScalarParser(const std::string& str) : s(str) {}

    void skip()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool eat(char c)
    {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg)
    {
        throw Error(Errc::ParseError, msg + " at position " + std::to_string(pos) + " in '" + s + "'");
    }

    long integer()
    {
        skip();
        bool neg = eat('-');
        skip();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            fail("expected integer");
        long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            v = v * 10 + (s[pos++] - '0');
        return neg ? -v : v;
    }

    // exponent measured in powers of t given the base ('q' doubles it)
    long exponent_in_t(bool base_is_q)
    {
        skip();
        if (eat('(')) {
            long n = integer();
            if (!eat('/'))
                fail("expected '/' in fractional exponent");
            long d = integer();
            if (!eat(')'))
                fail("expected ')'");
            if (d != 2)
                fail("only half-integer exponents supported");
            if (!base_is_q)
                fail("fractional exponent on t");
            return n; // q^(n/2) = t^n
        }
        long n = integer();
        return base_is_q ? 2 * n : n;
    }

    Scalar atom()
    {
        skip();
        if (pos >= s.size())
            fail("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            Scalar v = expr();
            if (!eat(')'))
                fail("expected ')'");
            return v;
        }
        if (c == 'q' || c == 't') {
            ++pos;
            bool q = c == 'q';
            if (eat('^'))
                return Scalar::t_pow(exponent_in_t(q));
            return Scalar::t_pow(q ? 2 : 1);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                ++pos;
            std::string numstr = s.substr(start, pos - start);
            skip();
            if (pos < s.size() && s[pos] == '/') {
                // lookahead: denominator must be an integer for a rational literal
                size_t save = pos;
                ++pos;
                skip();
                if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                    size_t dstart = pos;
                    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                        ++pos;
                    return Scalar(rat_from_string(numstr + "/" + s.substr(dstart, pos - dstart)));
                }
                pos = save;
            }
            return Scalar(rat_from_string(numstr));
        }
        fail("unexpected character");
    }

    Scalar factor()
    {
        skip();
        bool neg = eat('-');
        Scalar v = atom();
        if (eat('^')) {
            long n = integer();
            if (n < 0) {
                v = v.inverse();
                n = -n;
            }
            Scalar p(1);
            for (long i = 0; i < n; ++i)
                p *= v;
            v = p;
        }
        return neg ? -v : v;
    }

    Scalar term()
    {
        Scalar v = factor();
        while (eat('*'))
            v *= factor();
        return v;
    }

    Scalar expr()
    {
        Scalar v = term();
        while (true) {
            skip();
            if (pos < s.size() && s[pos] == '+') {
                ++pos;
                v += term();
            } else if (pos < s.size() && s[pos] == '-') {
                ++pos;
                v -= term();
            } else {
                break;
            }
        }
        return v;
    }
};

} // namespace detail

inline Scalar parse_scalar(const std::string& text)
{
    detail::ScalarParser p(text);
    Scalar v = p.expr();
    p.skip();
    if (p.pos != text.size())
        throw Error(Errc::ParseError, "trailing input in scalar '" + text + "'");
    return v;
}

// A Hecke parameter value: a monomial q^m = t^{2m} with m >= 1.
inline long hecke_exponent(const Scalar& p)
{
    if (!p.is_monomial() || p.lead_coeff() != 1)
        throw Error(Errc::BadInput, "parameter must be a monomial power of q: " + p.to_string());
    long e = p.exponent();
    if (e < 2 || e % 2 != 0)
        throw Error(Errc::BadInput, "parameter must be q^m with m >= 1: " + p.to_string());
    return e / 2;
}

} // namespace heckelab
