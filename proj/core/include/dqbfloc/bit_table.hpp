#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dqbfloc {

/// Fixed-length bit vector used as a truth table over 2^k assignments.
class BitTable {
public:
    BitTable() = default;
    BitTable(std::size_t bits, bool value) : bits_(bits), words_((bits + 63) / 64, value ? ~0ULL : 0ULL) { trim(); }

    /// Bit m is set iff variable number \p index is true in assignment m.
    static BitTable projection(std::size_t index, std::size_t bits) {
        BitTable t(bits, false);
        for (std::size_t m = 0; m < bits; ++m)
            if ((m >> index) & 1U)
                t.set(m, true);
        return t;
    }

    [[nodiscard]] std::size_t size() const { return bits_; }
    [[nodiscard]] bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    void set(std::size_t i, bool v) {
        if (v)
            words_[i / 64] |= 1ULL << (i % 64);
        else
            words_[i / 64] &= ~(1ULL << (i % 64));
    }

    BitTable& operator&=(const BitTable& o) {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= o.words_[i];
        return *this;
    }
    BitTable& operator|=(const BitTable& o) {
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] |= o.words_[i];
        return *this;
    }
    [[nodiscard]] BitTable operator~() const {
        BitTable t = *this;
        for (auto& w : t.words_)
            w = ~w;
        t.trim();
        return t;
    }

    [[nodiscard]] bool all() const { return *this == BitTable(bits_, true); }
    [[nodiscard]] bool none() const {
        for (auto w : words_)
            if (w)
                return false;
        return true;
    }
    [[nodiscard]] std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    friend bool operator==(const BitTable&, const BitTable&) = default;

private:
    void trim() {
        if (bits_ % 64 && !words_.empty())
            words_.back() &= (1ULL << (bits_ % 64)) - 1;
    }

    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace dqbfloc
