#include "fcrystal/isocrystal.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fcrystal/rootdata.hpp"

namespace fcrystal {

void MonomialOperator::validate() const {
    if (size < 1) throw std::invalid_argument("operator size must be >= 1");
    if (int(perm.size()) != size || int(exp.size()) != size)
        throw std::invalid_argument("operator field lengths must match size");
    std::vector<char> seen(size, 0);
    for (int i : perm) {
        if (i < 0 || i >= size || seen[i]++)
            throw std::invalid_argument("operator permutation is not a bijection");
    }
}

std::vector<Cycle> cycles(const MonomialOperator& op) {
    op.validate();
    std::vector<char> visited(op.size, 0);
    std::vector<Cycle> out;
    for (int start = 0; start < op.size; ++start) {
        if (visited[start]) continue;
        Cycle c;
        long long total = 0;
        int i = start;
        do {
            visited[i] = 1;
            c.indices.push_back(i);
            total += op.exp[i];
            i = op.perm[i];
        } while (i != start);
        c.slope = Rat(total, (long long)c.indices.size());
        out.push_back(std::move(c));
    }
    return out;
}

NewtonPolygon polygon_from_slopes(std::vector<Rat> raw) {
    std::sort(raw.begin(), raw.end());
    NewtonPolygon poly;
    for (const auto& s : raw) {
        if (!poly.slopes.empty() && poly.slopes.back().first == s)
            ++poly.slopes.back().second;
        else
            poly.slopes.push_back({s, 1});
    }
    return poly;
}

NewtonPolygon slope_polygon(const MonomialOperator& op) {
    std::vector<Rat> raw;
    raw.reserve(op.size);
    for (const auto& c : cycles(op))
        raw.insert(raw.end(), c.indices.size(), c.slope);
    return polygon_from_slopes(std::move(raw));
}

long long NewtonPolygon::height() const {
    long long h = 0;
    for (const auto& [s, m] : slopes) h += m;
    return h;
}

Rat NewtonPolygon::degree() const {
    Rat d;
    for (const auto& [s, m] : slopes) d += s * Rat(m);
    return d;
}

std::vector<std::pair<long long, Rat>> NewtonPolygon::vertices() const {
    std::vector<std::pair<long long, Rat>> v;
    long long x = 0;
    Rat y;
    v.push_back({x, y});
    for (const auto& [s, m] : slopes) {
        x += m;
        y += s * Rat(m);
        v.push_back({x, y});
    }
    return v;
}

std::string NewtonPolygon::str() const {
    std::string out;
    for (size_t i = 0; i < slopes.size(); ++i) {
        if (i) out += ';';
        out += slopes[i].first.str() + ":" + std::to_string(slopes[i].second);
    }
    return out;
}

SlopeDecomposition slope_decomposition(const MonomialOperator& op) {
    std::map<Rat, std::vector<int>> by_slope;
    for (const auto& c : cycles(op)) {
        auto& v = by_slope[c.slope];
        v.insert(v.end(), c.indices.begin(), c.indices.end());
    }
    SlopeDecomposition dec;
    for (auto& [slope, indices] : by_slope) {
        std::sort(indices.begin(), indices.end());
        dec.pieces.push_back({slope, std::move(indices)});
    }
    return dec;
}

std::vector<int> SlopeDecomposition::upper(const Rat& gamma) const {
    std::vector<int> out;
    for (const auto& p : pieces)
        if (!(p.slope < gamma)) out.insert(out.end(), p.indices.begin(), p.indices.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> SlopeDecomposition::lower(const Rat& gamma) const {
    std::vector<int> out;
    for (const auto& p : pieces)
        if (!(gamma < p.slope)) out.insert(out.end(), p.indices.begin(), p.indices.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool sharp_check(const NewtonPolygon& polygon, int r) {
    if (polygon.height() != 2 * r) return false;
    if (polygon.degree() != Rat(r)) return false;
    std::map<Rat, long long> mult;
    for (const auto& [s, m] : polygon.slopes) {
        if (s < Rat(0) || Rat(1) < s) return false;
        mult[s] = m;
    }
    for (const auto& [s, m] : mult) {
        auto it = mult.find(Rat(1) - s);
        if (it == mult.end() || it->second != m) return false;
    }
    return true;
}

bool integral_breakpoints(const NewtonPolygon& polygon) {
    for (const auto& [x, y] : polygon.vertices())
        if (!y.is_integer()) return false;
    return true;
}

namespace {

void enumerate_paths(int height, int degree, long long x, long long y, const Rat& prev,
                     std::vector<std::pair<Rat, long long>>& acc,
                     std::vector<NewtonPolygon>& out) {
    if (x == height) {
        if (y == degree) {
            NewtonPolygon p;
            p.slopes = acc;
            out.push_back(std::move(p));
        }
        return;
    }
    for (long long nx = x + 1; nx <= height; ++nx) {
        for (long long ny = y; ny <= degree; ++ny) {
            Rat s(ny - y, nx - x);
            if (Rat(1) < s || !(prev < s)) continue;
            // the remaining climb cannot exceed slope 1
            if (degree - ny > height - nx) continue;
            acc.push_back({s, nx - x});
            enumerate_paths(height, degree, nx, ny, s, acc, out);
            acc.pop_back();
        }
    }
}

} // namespace

std::vector<NewtonPolygon> enumerate_symmetric_polygons(int r) {
    if (r < 1 || r > 8)
        throw std::invalid_argument("symmetric polygon enumeration supports 1 <= r <= 8");
    std::vector<NewtonPolygon> all;
    std::vector<std::pair<Rat, long long>> acc;
    enumerate_paths(2 * r, r, 0, 0, Rat(-1), acc, all);
    std::vector<NewtonPolygon> out;
    for (auto& p : all)
        if (sharp_check(p, r)) out.push_back(std::move(p));
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Rat> integer_slope_witness(const MonomialOperator& op) {
    for (const auto& c : cycles(op))
        if (c.slope.is_integer()) return c.slope;
    return std::nullopt;
}

void PairingSpec::validate() const {
    int m = int(partner.size());
    int fixed = 0;
    for (int i = 0; i < m; ++i) {
        if (partner[i] < 0 || partner[i] >= m || partner[partner[i]] != i)
            throw std::invalid_argument("pairing partner map is not an involution");
        if (partner[i] == i) ++fixed;
    }
    if (fixed != m % 2)
        throw std::invalid_argument("perfect pairing must have exactly size%2 fixed points");
}

bool pairing_symmetry_check(const MonomialOperator& op, const PairingSpec& pairing) {
    op.validate();
    pairing.validate();
    if (int(pairing.partner.size()) != op.size)
        throw std::invalid_argument("pairing size mismatch");
    for (int i = 0; i < op.size; ++i)
        if (op.perm[pairing.partner[i]] != pairing.partner[op.perm[i]])
            throw std::invalid_argument(
                "operator permutation does not preserve the pairing partner structure");

    auto dec = slope_decomposition(op);
    const Rat& c = pairing.similitude_slope;
    for (const auto& piece : dec.pieces) {
        Rat mirror = c - piece.slope;
        const SlopeDecomposition::Piece* other = nullptr;
        for (const auto& q : dec.pieces)
            if (q.slope == mirror) { other = &q; break; }
        if (!other || other->indices.size() != piece.indices.size()) return false;
        // the involution must carry M_gamma onto M_{c-gamma}
        for (int i : piece.indices) {
            int j = pairing.partner[i];
            if (!std::binary_search(other->indices.begin(), other->indices.end(), j))
                return false;
        }
    }
    return true;
}

ManinReport manin_achievability(int r) {
    ManinReport report;
    auto datum = make_group_datum(Family::GSp, r, 1, 1);
    auto mu = MinusculeSpec::siegel(datum);
    WeylEnumeration en(datum, false);
    std::set<NewtonPolygon> achieved;
    en.for_each([&](const WeylElement& w) {
        achieved.insert(slope_polygon(weyl_to_monomial(datum, w, mu)));
    });
    report.achieved.assign(achieved.begin(), achieved.end());
    report.admissible = enumerate_symmetric_polygons(r);
    report.equal = report.achieved == report.admissible;
    return report;
}

} // namespace fcrystal
