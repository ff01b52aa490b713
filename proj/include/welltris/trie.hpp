#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "welltris/core.hpp"

namespace welltris {

inline constexpr std::string_view kLambda = "\xce\xbb";  // UTF-8 'λ'
inline constexpr std::string_view kLambdaAscii = "_";

// Dimensions joined by commas; lambda rendered as `lambda_token`.
std::string serialize(const DyadicBox& box, std::string_view lambda_token = kLambda);
// Accepts either lambda token. Throws SchemaError on malformed input.
DyadicBox parse_box(std::string_view text, int bits);

// Prefix tree over the box alphabet {0, 1, lambda, comma}. Each stored box is one
// root-to-terminal path spelling its serialization.
class DyadicTrie {
public:
    enum Symbol : std::uint8_t { kZero = 0, kOne = 1, kLambdaSym = 2, kComma = 3 };

    DyadicTrie(std::size_t dims, int bits);

    std::size_t dims() const { return dims_; }
    int bits() const { return bits_; }
    std::size_t size() const { return size_; }

    // Returns true if the box was not already present.
    bool insert(const DyadicBox& box);
    bool contains(const DyadicBox& box) const;

    // Visits every stored box containing the (table-local) point. The walk either
    // follows the next coordinate bit or closes the dimension (lambda or a shorter
    // stored prefix) and crosses the comma. `visit` returns false to stop early.
    void visit_covering(const Point& local, const std::function<bool(const DyadicBox&)>& visit) const;
    bool covers(const Point& local) const;

    // Stored boxes in trie order (0 < 1 < lambda < comma per symbol).
    std::vector<DyadicBox> boxes() const;

private:
    struct Node {
        std::array<std::int32_t, 4> next{-1, -1, -1, -1};
        bool terminal = false;
    };

    std::vector<Symbol> symbols(const DyadicBox& box) const;
    bool walk_covering(std::int32_t node, std::size_t dim, const Point& p, std::vector<int>& lens,
                       const std::function<bool(const DyadicBox&)>& visit) const;
    void check(const DyadicBox& box) const;

    std::size_t dims_;
    int bits_;
    std::size_t size_ = 0;
    std::vector<Node> nodes_;
};

}  // namespace welltris
