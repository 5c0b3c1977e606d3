#include "ergolab/set_ops.hpp"

#include <sstream>
#include <stdexcept>

namespace ergolab {

Rational TorusBox::measure() const {
    Rational m(1);
    for (const auto& f : factors) m *= f.measure();
    return m;
}

bool TorusBox::is_empty() const {
    for (const auto& f : factors)
        if (f.is_empty()) return true;
    return factors.empty();
}

TorusBox TorusBox::intersect(const TorusBox& other) const {
    if (factors.size() != other.factors.size())
        throw std::invalid_argument("torus dimension mismatch");
    TorusBox out;
    out.factors.reserve(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i)
        out.factors.push_back(factors[i].intersect(other.factors[i]));
    return out;
}

TorusBox TorusBox::translate_mod1(const std::vector<Rational>& angles) const {
    if (angles.size() != factors.size())
        throw std::invalid_argument("torus dimension mismatch");
    TorusBox out;
    out.factors.reserve(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i)
        out.factors.push_back(factors[i].translate_mod1(angles[i]));
    return out;
}

bool TorusBox::contains(const std::vector<Rational>& point) const {
    if (point.size() != factors.size())
        throw std::invalid_argument("torus dimension mismatch");
    for (std::size_t i = 0; i < factors.size(); ++i)
        if (!factors[i].contains(point[i])) return false;
    return true;
}

std::string TorusBox::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) os << " x ";
        os << factors[i].str();
    }
    return os.str();
}

SetFamily family_of(const MeasurableSet& s) {
    return static_cast<SetFamily>(s.index());
}

const char* family_name(SetFamily f) {
    switch (f) {
        case SetFamily::Interval: return "interval";
        case SetFamily::Cylinder: return "cylinder";
        case SetFamily::Rect: return "rect";
        case SetFamily::Torus: return "torus";
    }
    return "?";
}

Rational measure(const MeasurableSet& s) {
    return std::visit([](const auto& v) { return v.measure(); }, s);
}

bool is_empty(const MeasurableSet& s) {
    return std::visit([](const auto& v) { return v.is_empty(); }, s);
}

bool sets_equal(const MeasurableSet& a, const MeasurableSet& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& va) {
            using T = std::decay_t<decltype(va)>;
            return va == std::get<T>(b);
        },
        a);
}

std::string set_str(const MeasurableSet& s) {
    return std::visit([](const auto& v) { return v.str(); }, s);
}

namespace {

template <class T>
MeasurableSet apply_typed(const T& a, const T& b, SetOp op) {
    switch (op) {
        case SetOp::Union: return a.unite(b);
        case SetOp::Intersect: return a.intersect(b);
        case SetOp::Minus: return a.minus(b);
        case SetOp::Symdiff: return a.symdiff(b);
    }
    throw std::logic_error("unreachable");
}

} // namespace

MeasurableSet apply_op(const MeasurableSet& a, const MeasurableSet& b, SetOp op) {
    if (a.index() != b.index())
        throw std::invalid_argument(std::string("set family mismatch: ") +
                                    family_name(family_of(a)) + " vs " +
                                    family_name(family_of(b)));
    if (std::holds_alternative<TorusBox>(a)) {
        if (op != SetOp::Intersect)
            throw std::domain_error("torus boxes support only intersection");
        return std::get<TorusBox>(a).intersect(std::get<TorusBox>(b));
    }
    return std::visit(
        [&](const auto& va) -> MeasurableSet {
            using T = std::decay_t<decltype(va)>;
            if constexpr (std::is_same_v<T, TorusBox>) {
                throw std::logic_error("unreachable");
            } else {
                return apply_typed(va, std::get<T>(b), op);
            }
        },
        a);
}

MeasurableSet complement(const MeasurableSet& s) {
    return std::visit(
        [](const auto& v) -> MeasurableSet {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, TorusBox>) {
                throw std::domain_error("torus boxes do not support complement");
            } else {
                return v.complement();
            }
        },
        s);
}

namespace {

std::string strip_spaces(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (c != ' ' && c != '\t') out.push_back(c);
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

} // namespace

Rational parse_rational_literal(const std::string& text) {
    return parse_rational(strip_spaces(text));
}

IntervalSet parse_interval_set(const std::string& text, IntervalSet::Ambient a) {
    const std::string s = strip_spaces(text);
    if (s.empty()) return IntervalSet::empty(a);
    std::vector<IntervalSet::Piece> pieces;
    for (const auto& item : split(s, ',')) {
        auto pos = item.find("..");
        if (pos == std::string::npos)
            throw std::invalid_argument("interval literal needs 'l..r': '" + item + "'");
        pieces.emplace_back(parse_rational(item.substr(0, pos)),
                            parse_rational(item.substr(pos + 2)));
    }
    return IntervalSet::from_pieces(std::move(pieces), a);
}

CylinderSet parse_cylinder_set(const std::string& text) {
    const std::string s = strip_spaces(text);
    if (s.empty()) return CylinderSet::empty();
    CylinderSet acc;
    for (const auto& item : split(s, '|')) {
        if (item.size() < 2 || item.front() != '{' || item.back() != '}')
            throw std::invalid_argument("cylinder literal needs '{c:v,...}': '" + item + "'");
        const std::string body = item.substr(1, item.size() - 2);
        std::map<std::int64_t, bool> bits;
        if (!body.empty()) {
            for (const auto& pair : split(body, ',')) {
                auto pos = pair.find(':');
                if (pos == std::string::npos)
                    throw std::invalid_argument("cylinder entry needs 'coord:bit': '" + pair + "'");
                const std::int64_t coord = std::stoll(pair.substr(0, pos));
                const std::string val = pair.substr(pos + 1);
                if (val != "0" && val != "1")
                    throw std::invalid_argument("cylinder bit must be 0 or 1: '" + pair + "'");
                if (bits.count(coord))
                    throw std::invalid_argument("duplicate coordinate in cylinder literal");
                bits[coord] = (val == "1");
            }
        }
        acc = acc.unite(CylinderSet::cylinder(std::move(bits)));
    }
    return acc;
}

} // namespace ergolab
