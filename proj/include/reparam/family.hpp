#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reparam {

/// Word family template, e.g. "a^n b^n : n in 1..30" or
/// "a^n : n in 10,50,100,200". Chunks without ^n are literal; "x^3" repeats
/// a literal three times; "x^n" scales with the family parameter.
struct WordFamily {
    struct Chunk {
        std::string text;
        bool scaled = false;       // repeated n times
        std::size_t repeat = 1;    // fixed repeat for unscaled ^k chunks
    };

    std::vector<Chunk> chunks;
    std::vector<std::size_t> ns;

    std::string expand(std::size_t n) const {
        std::string out;
        for (const Chunk& c : chunks) {
            std::size_t times = c.scaled ? n : c.repeat;
            for (std::size_t i = 0; i < times; ++i)
                out += c.text;
        }
        return out;
    }

    std::vector<std::string> words() const {
        std::vector<std::string> out;
        for (std::size_t n : ns)
            out.push_back(expand(n));
        return out;
    }
};

inline WordFamily parse_family(std::string_view text) {
    WordFamily family;
    std::string_view range;
    if (auto colon = text.find(':'); colon != std::string_view::npos) {
        range = text.substr(colon + 1);
        text = text.substr(0, colon);
    }

    std::size_t at = 0;
    auto skip = [&] {
        while (at < text.size() && std::isspace(static_cast<unsigned char>(text[at])))
            ++at;
    };
    skip();
    while (at < text.size()) {
        WordFamily::Chunk chunk;
        while (at < text.size() && std::isalnum(static_cast<unsigned char>(text[at])) &&
               text[at] != '^')
            chunk.text += text[at++];
        if (chunk.text.empty())
            throw std::invalid_argument("bad word family near column " + std::to_string(at + 1));
        if (at < text.size() && text[at] == '^') {
            ++at;
            if (at < text.size() && text[at] == 'n') {
                chunk.scaled = true;
                ++at;
            } else {
                std::size_t begin = at;
                while (at < text.size() && std::isdigit(static_cast<unsigned char>(text[at])))
                    ++at;
                if (at == begin)
                    throw std::invalid_argument("expected 'n' or a number after '^'");
                chunk.repeat = std::stoull(std::string(text.substr(begin, at - begin)));
            }
        }
        family.chunks.push_back(std::move(chunk));
        skip();
    }
    if (family.chunks.empty())
        throw std::invalid_argument("empty word family");

    bool scaled = false;
    for (const WordFamily::Chunk& c : family.chunks)
        scaled |= c.scaled;
    if (range.empty()) {
        if (scaled)
            throw std::invalid_argument("family uses ^n but gives no range ': n in ...'");
        family.ns = {1};
        return family;
    }

    std::size_t r = 0;
    auto rskip = [&] {
        while (r < range.size() && std::isspace(static_cast<unsigned char>(range[r])))
            ++r;
    };
    auto expect = [&](std::string_view token) {
        rskip();
        if (range.substr(r, token.size()) != token)
            throw std::invalid_argument("bad family range, expected '" + std::string(token) + "'");
        r += token.size();
    };
    auto number = [&]() -> std::size_t {
        rskip();
        std::size_t begin = r;
        while (r < range.size() && std::isdigit(static_cast<unsigned char>(range[r])))
            ++r;
        if (r == begin)
            throw std::invalid_argument("bad family range, expected a number");
        return std::stoull(std::string(range.substr(begin, r - begin)));
    };
    expect("n");
    expect("in");
    std::size_t first = number();
    rskip();
    if (range.substr(r, 2) == "..") {
        r += 2;
        std::size_t last = number();
        if (last < first)
            throw std::invalid_argument("empty family range");
        for (std::size_t n = first; n <= last; ++n)
            family.ns.push_back(n);
    } else {
        family.ns.push_back(first);
        while (true) {
            rskip();
            if (r >= range.size())
                break;
            expect(",");
            family.ns.push_back(number());
        }
    }
    return family;
}

}  // namespace reparam
