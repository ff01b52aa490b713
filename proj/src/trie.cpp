#include "welltris/trie.hpp"

namespace welltris {

std::string serialize(const DyadicBox& box, std::string_view lambda_token) {
    std::string out;
    for (std::size_t i = 0; i < box.dims(); ++i) {
        if (i > 0) out.push_back(',');
        const Prefix& p = box[i];
        if (p.is_lambda()) {
            out.append(lambda_token);
            continue;
        }
        for (int b = p.len - 1; b >= 0; --b) out.push_back(((p.bits >> b) & 1) ? '1' : '0');
    }
    return out;
}

DyadicBox parse_box(std::string_view text, int bits) {
    std::vector<Prefix> prefixes;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = text.find(',', start);
        const std::string_view field = text.substr(start, end == std::string_view::npos ? end : end - start);
        Prefix p;
        if (field != kLambda && field != kLambdaAscii) {
            if (field.empty()) throw SchemaError("empty dimension in box '" + std::string(text) + "'");
            if (field.size() > static_cast<std::size_t>(bits))
                throw SchemaError("prefix longer than bit length in '" + std::string(text) + "'");
            for (char c : field) {
                if (c != '0' && c != '1') throw SchemaError("bad symbol in box '" + std::string(text) + "'");
                p.bits = (p.bits << 1) | static_cast<Coord>(c - '0');
            }
            p.len = static_cast<int>(field.size());
        }
        prefixes.push_back(p);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return DyadicBox(bits, std::move(prefixes));
}

DyadicTrie::DyadicTrie(std::size_t dims, int bits) : dims_(dims), bits_(bits), nodes_(1) {
    if (dims == 0) throw SchemaError("trie needs at least one dimension");
}

void DyadicTrie::check(const DyadicBox& box) const {
    if (box.dims() != dims_ || box.bits() != bits_)
        throw SchemaError("box does not match trie dimensionality");
}

std::vector<DyadicTrie::Symbol> DyadicTrie::symbols(const DyadicBox& box) const {
    std::vector<Symbol> out;
    for (std::size_t i = 0; i < box.dims(); ++i) {
        if (i > 0) out.push_back(kComma);
        const Prefix& p = box[i];
        if (p.is_lambda()) {
            out.push_back(kLambdaSym);
            continue;
        }
        for (int b = p.len - 1; b >= 0; --b) out.push_back(((p.bits >> b) & 1) ? kOne : kZero);
    }
    return out;
}

bool DyadicTrie::insert(const DyadicBox& box) {
    check(box);
    std::int32_t node = 0;
    for (Symbol s : symbols(box)) {
        if (nodes_[node].next[s] < 0) {
            nodes_[node].next[s] = static_cast<std::int32_t>(nodes_.size());
            nodes_.emplace_back();
        }
        node = nodes_[node].next[s];
    }
    if (nodes_[node].terminal) return false;
    nodes_[node].terminal = true;
    ++size_;
    return true;
}

bool DyadicTrie::contains(const DyadicBox& box) const {
    if (box.dims() != dims_ || box.bits() != bits_) return false;
    std::int32_t node = 0;
    for (Symbol s : symbols(box)) {
        node = nodes_[node].next[s];
        if (node < 0) return false;
    }
    return nodes_[node].terminal;
}

bool DyadicTrie::walk_covering(std::int32_t node, std::size_t dim, const Point& p, std::vector<int>& lens,
                               const std::function<bool(const DyadicBox&)>& visit) const {
    const bool last = dim + 1 == dims_;
    // Called at a node where the current dimension has just been closed.
    auto close = [&](std::int32_t at) -> bool {
        if (last) {
            if (!nodes_[at].terminal) return true;
            std::vector<Prefix> prefixes(dims_);
            for (std::size_t i = 0; i < dims_; ++i)
                prefixes[i] = Prefix{lens[i] == 0 ? 0 : p[i] >> (bits_ - lens[i]), lens[i]};
            return visit(DyadicBox(bits_, std::move(prefixes)));
        }
        const std::int32_t comma = nodes_[at].next[kComma];
        return comma < 0 || walk_covering(comma, dim + 1, p, lens, visit);
    };

    if (const std::int32_t lam = nodes_[node].next[kLambdaSym]; lam >= 0) {
        lens[dim] = 0;
        if (!close(lam)) return false;
    }
    std::int32_t cur = node;
    for (int len = 1; len <= bits_; ++len) {
        const auto bit = static_cast<Symbol>((p[dim] >> (bits_ - len)) & 1);
        cur = nodes_[cur].next[bit];
        if (cur < 0) break;
        lens[dim] = len;
        if (!close(cur)) return false;
    }
    return true;
}

void DyadicTrie::visit_covering(const Point& local, const std::function<bool(const DyadicBox&)>& visit) const {
    if (local.size() != dims_) throw SchemaError("point does not match trie dimensionality");
    for (auto c : local)
        if (c >> bits_) throw SchemaError("coordinate does not fit in trie bit length");
    std::vector<int> lens(dims_, 0);
    walk_covering(0, 0, local, lens, visit);
}

bool DyadicTrie::covers(const Point& local) const {
    bool found = false;
    visit_covering(local, [&](const DyadicBox&) {
        found = true;
        return false;
    });
    return found;
}

std::vector<DyadicBox> DyadicTrie::boxes() const {
    std::vector<DyadicBox> out;
    std::vector<Prefix> cur(dims_);
    std::size_t dim = 0;
    std::function<void(std::int32_t)> rec = [&](std::int32_t node) {
        const Node& n = nodes_[node];
        if (n.terminal && dim + 1 == dims_) out.emplace_back(bits_, cur);
        for (int s = 0; s < 4; ++s) {
            const std::int32_t child = n.next[s];
            if (child < 0) continue;
            if (s == kComma) {
                const Prefix saved = cur[dim + 1];
                ++dim;
                cur[dim] = Prefix{};
                rec(child);
                cur[dim] = saved;
                --dim;
            } else if (s == kLambdaSym) {
                rec(child);
            } else {
                const Prefix saved = cur[dim];
                cur[dim] = Prefix{(saved.bits << 1) | static_cast<Coord>(s), saved.len + 1};
                rec(child);
                cur[dim] = saved;
            }
        }
    };
    rec(0);
    return out;
}

}  // namespace welltris
