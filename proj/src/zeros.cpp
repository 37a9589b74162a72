#include "oscillax/zeros.hpp"

#include "oscillax/zeta.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oscillax {

std::size_t ZeroSet::count_up_to(double t) const
{
    return static_cast<std::size_t>(
        std::upper_bound(gammas.begin(), gammas.end(), DDouble(t)) - gammas.begin());
}

ZeroSet ZeroSet::truncated(double t) const { return first(count_up_to(t)); }

ZeroSet ZeroSet::first(std::size_t count) const
{
    ZeroSet out;
    out.stated_digits = stated_digits;
    out.source = source;
    out.gammas.assign(gammas.begin(), gammas.begin() + static_cast<std::ptrdiff_t>(std::min(count, size())));
    return out;
}

namespace {

int fractional_digits(const std::string &token)
{
    const auto dot = token.find('.');
    if (dot == std::string::npos) {
        return 0;
    }
    int n = 0;
    for (std::size_t i = dot + 1; i < token.size() && token[i] >= '0' && token[i] <= '9'; ++i) {
        ++n;
    }
    return n;
}

} // namespace

ZeroSet parse_zeros(const std::string &text, const std::string &source)
{
    ZeroSet out;
    out.source = source;
    out.stated_digits = 1000;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) {
            tokens.push_back(tok);
        }
        if (tokens.empty()) {
            continue;
        }
        const auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
        if (tokens.size() > 2) {
            throw std::runtime_error(where() + "expected one ordinate per line");
        }
        const std::string &tok = tokens.back();
        DDouble g;
        try {
            g = dd::parse(tok);
        } catch (const std::invalid_argument &) {
            throw std::runtime_error(where() + "cannot parse '" + tok + "'");
        }
        const int digits = fractional_digits(tok);
        if (digits < kMinZeroDigits) {
            throw std::runtime_error(where() + "'" + tok + "' has " + std::to_string(digits) +
                                     " fractional digits; at least " + std::to_string(kMinZeroDigits) +
                                     " are required");
        }
        if (!(g > DDouble(0.0))) {
            throw std::runtime_error(where() + "ordinates must be positive");
        }
        if (!out.gammas.empty() && !(g > out.gammas.back())) {
            throw std::runtime_error(where() + "ordinates must be strictly increasing");
        }
        out.stated_digits = std::min(out.stated_digits, digits);
        out.gammas.push_back(g);
    }
    if (out.gammas.empty()) {
        out.stated_digits = 0;
    }
    return out;
}

ZeroSet load_zeros(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open zeros file " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_zeros(text.str(), path);
}

ZeroCheck validate_zeros(const ZeroSet &zeros, std::size_t count)
{
    const std::size_t n = count == 0 ? zeros.size() : std::min(count, zeros.size());
    ZeroCheck check;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = dd::abs(zeta(DDComplex(DDouble(0.5), zeros.gammas[i]))).to_double();
        if (v > check.max_abs_zeta || check.worst_index == 0) {
            check.max_abs_zeta = v;
            check.worst_index = i + 1;
        }
    }
    return check;
}

} // namespace oscillax
