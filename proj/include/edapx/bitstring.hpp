#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edapx/errors.hpp"
#include "edapx/prng.hpp"

namespace edapx {

enum class Alphabet : uint8_t { Binary, Bytes };

inline uint32_t alphabet_size(Alphabet a) { return a == Alphabet::Binary ? 2u : 256u; }

// A string over a small integer alphabet (binary by default). Substring
// positions are 0-based throughout the implementation.
class BitString {
  public:
    BitString() = default;
    BitString(std::vector<uint8_t> symbols, uint32_t sigma)
        : symbols_(std::move(symbols)), sigma_(sigma) {
        for (uint8_t s : symbols_)
            if (s >= sigma_) throw InvalidInput("BitString: symbol outside alphabet");
    }

    static BitString from_text(const std::string& text, Alphabet a) {
        std::vector<uint8_t> sym;
        sym.reserve(text.size());
        if (a == Alphabet::Binary) {
            for (char c : text) {
                if (c == '0' || c == '1')
                    sym.push_back(static_cast<uint8_t>(c - '0'));
                else if (c != '\n' && c != '\r')
                    throw InvalidInput("binary alphabet accepts only '0', '1' and newlines");
            }
        } else {
            for (char c : text) sym.push_back(static_cast<uint8_t>(c));
        }
        return BitString(std::move(sym), alphabet_size(a));
    }

    static BitString random(size_t n, uint32_t sigma, uint64_t seed) {
        std::vector<uint8_t> sym(n);
        uint64_t sid = stream(seed, "bitstring.random");
        for (size_t i = 0; i < n; ++i)
            sym[i] = static_cast<uint8_t>(mix64(sid ^ mix64(i)) % sigma);
        return BitString(std::move(sym), sigma);
    }

    size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    uint32_t sigma() const { return sigma_; }
    uint8_t operator[](size_t i) const { return symbols_[i]; }
    const std::vector<uint8_t>& symbols() const { return symbols_; }

    BitString substr(size_t pos, size_t len) const {
        if (pos + len > size()) throw InvalidInput("BitString::substr: out of range");
        std::vector<uint8_t> sym(symbols_.begin() + pos, symbols_.begin() + pos + len);
        return BitString(std::move(sym), sigma_);
    }

    BitString concat(const BitString& other) const {
        if (sigma_ != other.sigma_) throw InvalidInput("concat: alphabet mismatch");
        std::vector<uint8_t> sym = symbols_;
        sym.insert(sym.end(), other.symbols_.begin(), other.symbols_.end());
        return BitString(std::move(sym), sigma_);
    }

    // Widens the alphabet by one reserved symbol and pads to length n with it.
    BitString padded_to(size_t n) const {
        std::vector<uint8_t> sym = symbols_;
        sym.resize(n, static_cast<uint8_t>(sigma_));
        return BitString(std::move(sym), sigma_ + 1);
    }

    BitString with_sigma(uint32_t sigma) const {
        if (sigma < sigma_) throw InvalidInput("with_sigma: narrower than content");
        return BitString(symbols_, sigma);
    }

    std::string to_text() const {
        std::string out;
        out.reserve(size());
        for (uint8_t s : symbols_)
            out.push_back(sigma_ == 2 ? static_cast<char>('0' + s) : static_cast<char>(s));
        return out;
    }

    friend bool operator==(const BitString& a, const BitString& b) {
        return a.sigma_ == b.sigma_ && a.symbols_ == b.symbols_;
    }

  private:
    std::vector<uint8_t> symbols_;
    uint32_t sigma_ = 2;
};

// Applies `edits` random single-character edits (insert / delete / substitute
// with equal weight), keeping the length fixed by construction is NOT
// attempted; callers that need equal lengths pad afterwards. The true edit
// distance of the result is at most `edits`.
inline BitString apply_random_edits(const BitString& x, size_t edits, uint64_t seed) {
    std::vector<uint8_t> sym = x.symbols();
    uint64_t sid = stream(seed, "bitstring.edits");
    for (size_t e = 0; e < edits; ++e) {
        uint64_t r = mix64(sid ^ mix64(e));
        uint64_t kind = r % 3;
        uint64_t r2 = mix64(r);
        if (sym.empty()) kind = 1;  // only insertion applies
        if (kind == 0) {            // substitute
            size_t pos = r2 % sym.size();
            uint8_t delta = 1 + static_cast<uint8_t>(mix64(r2) % (x.sigma() - 1));
            sym[pos] = static_cast<uint8_t>((sym[pos] + delta) % x.sigma());
        } else if (kind == 1) {  // insert
            size_t pos = r2 % (sym.size() + 1);
            sym.insert(sym.begin() + pos, static_cast<uint8_t>(mix64(r2) % x.sigma()));
        } else {  // delete
            size_t pos = r2 % sym.size();
            sym.erase(sym.begin() + pos);
        }
    }
    return BitString(std::move(sym), x.sigma());
}

// Fixed-length variant: substitutions only, at `edits` distinct positions.
// Guarantees ed(x, y) <= edits and, for random x, typically close to it.
inline BitString apply_random_substitutions(const BitString& x, size_t edits, uint64_t seed) {
    if (edits > x.size()) throw InvalidInput("more substitutions than positions");
    std::vector<uint8_t> sym = x.symbols();
    uint64_t sid = stream(seed, "bitstring.subst");
    size_t done = 0;
    for (uint64_t ctr = 0; done < edits; ++ctr) {
        size_t pos = mix64(sid ^ mix64(ctr)) % sym.size();
        if (sym[pos] != x.symbols()[pos]) continue;  // already edited
        uint8_t delta = 1 + static_cast<uint8_t>(mix64(mix64(ctr) ^ sid) % (x.sigma() - 1));
        sym[pos] = static_cast<uint8_t>((sym[pos] + delta) % x.sigma());
        ++done;
    }
    return BitString(std::move(sym), x.sigma());
}

}  // namespace edapx
