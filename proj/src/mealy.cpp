#include "cspda/mealy.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "cspda/machine.hpp"

namespace cspda {

void MealyMachine::check() const {
    if (degree < 2)
        throw SpecError("tree alphabet needs at least two letters");
    if (table.empty() || initial >= table.size())
        throw SpecError("mealy machine has no states or a bad initial state");
    for (std::size_t s = 0; s < table.size(); ++s) {
        if (table[s].size() != degree)
            throw SpecError("mealy state " + std::to_string(s) + " row has wrong arity");
        std::vector<bool> seen(degree, false);
        for (const auto& [next, out] : table[s]) {
            if (next >= table.size() || out >= degree)
                throw SpecError("mealy transition out of range");
            if (seen[out])
                throw SpecError("mealy state " + std::to_string(s) + " output not a bijection");
            seen[out] = true;
        }
    }
}

TreeWord MealyMachine::apply(const TreeWord& w) const {
    TreeWord out;
    out.reserve(w.size());
    std::uint32_t s = initial;
    for (TreeLetter x : w) {
        auto [next, y] = table[s][x];
        out.push_back(y);
        s = next;
    }
    return out;
}

MealyMachine MealyMachine::inverse() const {
    MealyMachine inv;
    inv.degree = degree;
    inv.initial = initial;
    inv.table.resize(table.size());
    for (std::size_t s = 0; s < table.size(); ++s) {
        inv.table[s].resize(degree);
        for (std::size_t x = 0; x < degree; ++x) {
            auto [next, y] = table[s][x];
            inv.table[s][y] = {next, static_cast<TreeLetter>(x)};
        }
    }
    return inv;
}

MealyMachine MealyMachine::identity(std::size_t degree) {
    MealyMachine m;
    m.degree = degree;
    m.table.resize(1);
    for (std::size_t x = 0; x < degree; ++x)
        m.table[0].push_back({0, static_cast<TreeLetter>(x)});
    return m;
}

MealyMachine mealy_product(const std::vector<MealyMachine>& machines) {
    if (machines.empty())
        throw SpecError("empty mealy product");
    std::size_t degree = machines[0].degree;
    for (const auto& m : machines)
        if (m.degree != degree)
            throw AlphabetMismatchError("mealy product over mismatched tree alphabets");

    using Tuple = std::vector<std::uint32_t>;
    std::map<Tuple, std::uint32_t> ids;
    std::deque<Tuple> work;

    MealyMachine prod;
    prod.degree = degree;

    Tuple start;
    for (const auto& m : machines)
        start.push_back(m.initial);
    ids[start] = 0;
    prod.table.emplace_back();
    work.push_back(start);

    while (!work.empty()) {
        Tuple cur = std::move(work.front());
        work.pop_front();
        std::uint32_t id = ids[cur];
        prod.table[id].resize(degree);
        for (std::size_t x = 0; x < degree; ++x) {
            TreeLetter letter = static_cast<TreeLetter>(x);
            Tuple next(cur.size());
            for (std::size_t i = 0; i < machines.size(); ++i) {
                auto [n, y] = machines[i].table[cur[i]][letter];
                next[i] = n;
                letter = y;
            }
            auto [it, inserted] = ids.emplace(next, static_cast<std::uint32_t>(ids.size()));
            if (inserted) {
                prod.table.emplace_back();
                work.push_back(next);
            }
            prod.table[id][x] = {it->second, letter};
        }
    }
    return prod;
}

bool mealy_is_identity(const MealyMachine& m) {
    std::vector<bool> visited(m.num_states(), false);
    std::deque<std::uint32_t> work{m.initial};
    visited[m.initial] = true;
    while (!work.empty()) {
        std::uint32_t s = work.front();
        work.pop_front();
        for (std::size_t x = 0; x < m.degree; ++x) {
            auto [next, y] = m.table[s][x];
            if (y != x)
                return false;
            if (!visited[next]) {
                visited[next] = true;
                work.push_back(next);
            }
        }
    }
    return true;
}

void FinitaryAutomorphism::check() const {
    if (degree < 2)
        throw SpecError("tree alphabet needs at least two letters");
    for (const auto& [node, perm] : perms) {
        if (node.size() >= depth)
            throw SpecError("finitary permutation below its own depth bound");
        for (TreeLetter x : node)
            if (x >= degree)
                throw SpecError("finitary node letter out of range");
        if (perm.size() != degree)
            throw SpecError("finitary permutation has wrong arity");
        std::vector<bool> seen(degree, false);
        for (TreeLetter y : perm) {
            if (y >= degree || seen[y])
                throw SpecError("finitary entry is not a permutation");
            seen[y] = true;
        }
    }
}

std::vector<TreeLetter> FinitaryAutomorphism::perm_at(const TreeWord& node) const {
    auto it = perms.find(node);
    if (it != perms.end())
        return it->second;
    std::vector<TreeLetter> id(degree);
    for (std::size_t x = 0; x < degree; ++x)
        id[x] = static_cast<TreeLetter>(x);
    return id;
}

FinitaryAutomorphism FinitaryAutomorphism::identity(std::size_t degree) {
    FinitaryAutomorphism phi;
    phi.degree = degree;
    phi.depth = 0;
    return phi;
}

TreeWord apply_finitary(const FinitaryAutomorphism& phi, const TreeWord& w) {
    TreeWord out;
    out.reserve(w.size());
    TreeWord node;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i < phi.depth)
            out.push_back(phi.perm_at(node)[w[i]]);
        else
            out.push_back(w[i]);
        node.push_back(w[i]);
    }
    return out;
}

void DirectedAutomorphism::check() const {
    if (degree < 2)
        throw SpecError("tree alphabet needs at least two letters");
    if (q.empty())
        throw SpecError("directed automorphism needs a nonempty spine period");
    if (p.size() != p_image.size() || q.size() != q_image.size())
        throw SpecError("spine image lengths do not match the spine");
    if (off_p.size() != p.size() || off_q.size() != q.size())
        throw SpecError("off-spine tables must have one row per spine class");
    auto check_row = [&](const std::map<TreeLetter, OffSpine>& row, TreeLetter spine) {
        for (std::size_t y = 0; y < degree; ++y) {
            TreeLetter letter = static_cast<TreeLetter>(y);
            if (letter == spine) {
                if (row.count(letter))
                    throw SpecError("off-spine entry shadows the spine letter");
                continue;
            }
            auto it = row.find(letter);
            if (it == row.end())
                throw SpecError("off-spine entry missing for a departing letter");
            if (it->second.image >= degree)
                throw SpecError("off-spine image letter out of range");
            it->second.tail.check();
        }
    };
    for (std::size_t l = 0; l < p.size(); ++l)
        check_row(off_p[l], p[l]);
    for (std::size_t j = 0; j < q.size(); ++j)
        check_row(off_q[j], q[j]);
}

TreeLetter DirectedAutomorphism::spine_letter(std::size_t pos) const {
    return pos < p.size() ? p[pos] : q[(pos - p.size()) % q.size()];
}

TreeLetter DirectedAutomorphism::image_letter(std::size_t pos) const {
    return pos < p.size() ? p_image[pos] : q_image[(pos - p.size()) % q.size()];
}

const DirectedAutomorphism::OffSpine& DirectedAutomorphism::off_spine(std::size_t cls,
                                                                      TreeLetter y) const {
    const auto& row = cls < p.size() ? off_p[cls] : off_q[(cls - p.size()) % q.size()];
    auto it = row.find(y);
    if (it == row.end())
        throw SpecError("no off-spine data for this departure");
    return it->second;
}

TreeWord apply_directed(const DirectedAutomorphism& delta, const TreeWord& w) {
    std::size_t l = 0;
    while (l < w.size() && w[l] == delta.spine_letter(l))
        ++l;
    TreeWord out;
    out.reserve(w.size());
    for (std::size_t i = 0; i < l; ++i)
        out.push_back(delta.image_letter(i));
    if (l == w.size())
        return out;  // entirely on the spine
    const auto& off = delta.off_spine(l, w[l]);
    out.push_back(off.image);
    TreeWord rest(w.begin() + l + 1, w.end());
    TreeWord tail = apply_finitary(off.tail, rest);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

MealyMachine generator_to_mealy(const FinitaryAutomorphism& phi) {
    phi.check();
    MealyMachine m;
    m.degree = phi.degree;

    // States: tree nodes of depth < k, breadth-first, then the identity sink.
    std::vector<TreeWord> nodes;
    std::map<TreeWord, std::uint32_t> ids;
    std::deque<TreeWord> work{{}};
    ids[{}] = 0;
    nodes.push_back({});
    while (!work.empty()) {
        TreeWord node = std::move(work.front());
        work.pop_front();
        if (node.size() + 1 >= phi.depth)
            continue;
        for (std::size_t x = 0; x < phi.degree; ++x) {
            TreeWord child = node;
            child.push_back(static_cast<TreeLetter>(x));
            ids[child] = static_cast<std::uint32_t>(nodes.size());
            nodes.push_back(child);
            work.push_back(std::move(child));
        }
    }
    std::uint32_t sink = static_cast<std::uint32_t>(nodes.size());

    m.table.resize(nodes.size() + 1);
    for (std::size_t s = 0; s < nodes.size(); ++s) {
        auto perm = phi.depth == 0 ? std::vector<TreeLetter>{} : phi.perm_at(nodes[s]);
        m.table[s].resize(phi.degree);
        for (std::size_t x = 0; x < phi.degree; ++x) {
            TreeWord child = nodes[s];
            child.push_back(static_cast<TreeLetter>(x));
            std::uint32_t next = child.size() < phi.depth ? ids.at(child) : sink;
            TreeLetter out = nodes[s].size() < phi.depth ? perm[x] : static_cast<TreeLetter>(x);
            m.table[s][x] = {next, out};
        }
    }
    for (std::size_t x = 0; x < phi.degree; ++x)
        m.table[sink].push_back({sink, static_cast<TreeLetter>(x)});
    if (phi.depth == 0)
        m.initial = sink;
    m.check();
    return m;
}

MealyMachine generator_to_mealy(const DirectedAutomorphism& delta) {
    delta.check();
    std::size_t d = delta.degree;
    std::size_t s = delta.p.size(), t = delta.q.size();

    MealyMachine m;
    m.degree = d;

    // Spine class states first, then each off-spine tail machine, then a sink.
    std::size_t classes = s + t;
    std::vector<std::uint32_t> tail_base;
    std::vector<MealyMachine> tails;
    for (std::size_t cls = 0; cls < classes; ++cls) {
        for (std::size_t y = 0; y < d; ++y) {
            TreeLetter letter = static_cast<TreeLetter>(y);
            if (letter == delta.spine_letter(cls))
                continue;
            tails.push_back(generator_to_mealy(delta.off_spine(cls, letter).tail));
        }
    }
    std::size_t total = classes;
    for (const auto& tm : tails) {
        tail_base.push_back(static_cast<std::uint32_t>(total));
        total += tm.num_states();
    }

    m.table.resize(total);
    std::size_t tail_index = 0;
    for (std::size_t cls = 0; cls < classes; ++cls) {
        m.table[cls].resize(d);
        for (std::size_t y = 0; y < d; ++y) {
            TreeLetter letter = static_cast<TreeLetter>(y);
            if (letter == delta.spine_letter(cls)) {
                // advance along the spine, wrapping into the periodic part
                std::uint32_t next = cls + 1 < s + t ? static_cast<std::uint32_t>(cls + 1)
                                                     : static_cast<std::uint32_t>(s);
                m.table[cls][y] = {next, delta.image_letter(cls)};
            } else {
                const auto& off = delta.off_spine(cls, letter);
                const MealyMachine& tm = tails[tail_index];
                m.table[cls][y] = {tail_base[tail_index] + tm.initial, off.image};
                ++tail_index;
            }
        }
    }
    for (std::size_t i = 0; i < tails.size(); ++i) {
        const MealyMachine& tm = tails[i];
        for (std::size_t ts = 0; ts < tm.num_states(); ++ts) {
            auto& row = m.table[tail_base[i] + ts];
            row.resize(d);
            for (std::size_t x = 0; x < d; ++x) {
                auto [next, out] = tm.table[ts][x];
                row[x] = {tail_base[i] + next, out};
            }
        }
    }
    m.initial = 0;
    m.check();
    return m;
}

MealyMachine generator_to_mealy(const GeneratorData& g) {
    return std::visit([](const auto& x) { return generator_to_mealy(x); }, g);
}

TreeWord apply_generator(const GeneratorData& g, const TreeWord& w) {
    if (std::holds_alternative<FinitaryAutomorphism>(g))
        return apply_finitary(std::get<FinitaryAutomorphism>(g), w);
    return apply_directed(std::get<DirectedAutomorphism>(g), w);
}

std::size_t generator_degree(const GeneratorData& g) {
    if (std::holds_alternative<FinitaryAutomorphism>(g))
        return std::get<FinitaryAutomorphism>(g).degree;
    return std::get<DirectedAutomorphism>(g).degree;
}

AutomatonGroupOracle::AutomatonGroupOracle(GroupAlphabet alphabet,
                                           std::map<Letter, MealyMachine> generators)
    : GroupOracle(std::move(alphabet)), generators_(std::move(generators)) {
    for (const auto& a : this->alphabet().letters)
        if (!generators_.count(a))
            throw SpecError("no transducer for generator '" + a + "'");
}

const MealyMachine& AutomatonGroupOracle::machine_for(const Letter& a) const {
    auto it = generators_.find(a);
    if (it == generators_.end())
        throw UnknownSymbolError("letter '" + a + "' has no transducer");
    return it->second;
}

bool AutomatonGroupOracle::is_trivial(const GWord& w) const {
    if (w.empty())
        return true;
    std::vector<MealyMachine> factors;
    factors.reserve(w.size());
    for (const auto& a : w)
        factors.push_back(machine_for(a));
    return mealy_is_identity(mealy_product(factors));
}

}  // namespace cspda
