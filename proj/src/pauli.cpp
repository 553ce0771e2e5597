// Copyright 2026 The otocsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "otocsim/pauli.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace otocsim {

PauliString& PauliString::set(int site, PauliLetter letter)
{
    if (site < 0 || site >= 64) {
        throw std::out_of_range("Pauli site index " + std::to_string(site) + " out of range");
    }
    terms_[site] = letter;
    return *this;
}

namespace {

class Cursor {
public:
    Cursor(std::string_view text, std::string_view whole) : text_(text), whole_(whole) {}

    void skip_space()
    {
        while (!text_.empty() && std::isspace(static_cast<unsigned char>(text_.front()))) {
            text_.remove_prefix(1);
        }
    }
    bool done()
    {
        skip_space();
        return text_.empty();
    }
    char peek()
    {
        skip_space();
        return text_.empty() ? '\0' : text_.front();
    }
    void expect(char c)
    {
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        text_.remove_prefix(1);
    }
    char take()
    {
        const char c = peek();
        if (c == '\0') {
            fail("unexpected end");
        }
        text_.remove_prefix(1);
        return c;
    }
    int integer()
    {
        skip_space();
        int value = 0;
        const auto [ptr, ec] = std::from_chars(text_.data(), text_.data() + text_.size(), value);
        if (ec != std::errc{}) {
            fail("expected integer");
        }
        text_.remove_prefix(static_cast<std::size_t>(ptr - text_.data()));
        return value;
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        const std::size_t offset = whole_.size() - text_.size();
        throw std::invalid_argument("invalid operator string \"" + std::string(whole_) +
                                    "\": " + what + " at offset " + std::to_string(offset));
    }

private:
    std::string_view text_;
    std::string_view whole_;
};

}  // namespace

PauliString PauliString::parse(std::string_view text, const GridGeometry& geometry)
{
    Cursor cur(text, text);
    PauliString out;
    if (cur.done()) {
        cur.fail("empty operator");
    }
    while (true) {
        const char raw = static_cast<char>(std::toupper(static_cast<unsigned char>(cur.take())));
        if (raw != 'X' && raw != 'Y' && raw != 'Z') {
            cur.fail(std::string("unknown Pauli letter '") + raw + "'");
        }
        cur.expect(':');
        cur.expect('(');
        const int row = cur.integer();
        cur.expect(',');
        const int col = cur.integer();
        cur.expect(')');
        const Site site{row, col};
        if (!geometry.contains(site)) {
            cur.fail("site (" + std::to_string(row) + "," + std::to_string(col) + ") outside " +
                     geometry.describe() + " grid");
        }
        const int index = geometry.index(site);
        if (out.terms_.contains(index)) {
            cur.fail("site (" + std::to_string(row) + "," + std::to_string(col) + ") repeated");
        }
        out.set(index, static_cast<PauliLetter>(raw));
        if (cur.done()) {
            break;
        }
        cur.expect(',');
    }
    return out;
}

std::string PauliString::to_string(const GridGeometry& geometry) const
{
    std::string out;
    for (const auto& [site, letter] : terms_) {
        const Site s = geometry.site(site);
        if (!out.empty()) {
            out += ',';
        }
        out += static_cast<char>(letter);
        out += ":(" + std::to_string(s.row) + "," + std::to_string(s.col) + ")";
    }
    return out;
}

std::vector<int> PauliString::sites() const
{
    std::vector<int> out;
    out.reserve(terms_.size());
    for (const auto& [site, letter] : terms_) {
        out.push_back(site);
    }
    return out;
}

bool PauliString::is_z_type() const noexcept
{
    for (const auto& [site, letter] : terms_) {
        if (letter != PauliLetter::Z) {
            return false;
        }
    }
    return true;
}

std::uint64_t PauliString::x_mask() const noexcept
{
    std::uint64_t mask = 0;
    for (const auto& [site, letter] : terms_) {
        if (letter != PauliLetter::Z) {
            mask |= std::uint64_t{1} << site;
        }
    }
    return mask;
}

std::uint64_t PauliString::z_mask() const noexcept
{
    std::uint64_t mask = 0;
    for (const auto& [site, letter] : terms_) {
        if (letter != PauliLetter::X) {
            mask |= std::uint64_t{1} << site;
        }
    }
    return mask;
}

int PauliString::y_count() const noexcept
{
    int count = 0;
    for (const auto& [site, letter] : terms_) {
        count += letter == PauliLetter::Y ? 1 : 0;
    }
    return count;
}

}  // namespace otocsim
