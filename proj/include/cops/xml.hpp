#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cops {

namespace detail {

// Appends the UTF-8 encoding of a Unicode code point. Surrogates and values
// past U+10FFFF are not encodable.
inline void append_utf8(std::string& out, unsigned long cp) {
    if (cp >= 0xD800 && cp <= 0xDFFF)
        throw std::invalid_argument("character reference is a surrogate code point");
    if (cp <= 0x7F) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7FF) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp <= 0xFFFF) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp <= 0x10FFFF) {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        throw std::invalid_argument("character reference outside the Unicode range");
    }
}

} // namespace detail

// Replaces the five named XML entities and numeric character references
// (&#NNN; and &#xHH;) with their characters, numeric ones encoded as UTF-8.
// Throws std::invalid_argument naming the entity on anything unrecognized.
inline std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c != '&') {
            out.push_back(c);
            ++i;
            continue;
        }
        std::size_t end = text.find(';', i + 1);
        if (end == std::string_view::npos || end - i > 32)
            throw std::invalid_argument("unterminated entity starting at '&'");
        std::string_view name = text.substr(i + 1, end - i - 1);
        if (name == "amp") {
            out.push_back('&');
        } else if (name == "lt") {
            out.push_back('<');
        } else if (name == "gt") {
            out.push_back('>');
        } else if (name == "quot") {
            out.push_back('"');
        } else if (name == "apos") {
            out.push_back('\'');
        } else if (!name.empty() && name[0] == '#') {
            bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
            std::string_view digits = name.substr(hex ? 2 : 1);
            if (digits.empty())
                throw std::invalid_argument("empty character reference '&" + std::string(name) +
                                            ";'");
            unsigned long cp = 0;
            for (char d : digits) {
                unsigned long v;
                if (d >= '0' && d <= '9') v = static_cast<unsigned long>(d - '0');
                else if (hex && d >= 'a' && d <= 'f') v = static_cast<unsigned long>(d - 'a' + 10);
                else if (hex && d >= 'A' && d <= 'F') v = static_cast<unsigned long>(d - 'A' + 10);
                else
                    throw std::invalid_argument("bad digit in character reference '&" +
                                                std::string(name) + ";'");
                cp = cp * (hex ? 16 : 10) + v;
                if (cp > 0x10FFFF)
                    throw std::invalid_argument("character reference outside the Unicode range");
            }
            detail::append_utf8(out, cp);
        } else {
            throw std::invalid_argument("unknown entity '&" + std::string(name) + ";'");
        }
        i = end + 1;
    }
    return out;
}

// One element scanned from a dump file: its attributes in document order and
// the byte offset of the '<' that opened it.
struct XmlRow {
    std::vector<std::pair<std::string, std::string>> attrs;
    std::size_t offset = 0;

    const std::string* find(std::string_view name) const {
        for (const auto& [k, v] : attrs)
            if (k == name) return &v;
        return nullptr;
    }
};

// Streaming scanner for the attribute-row dump layout: a root element whose
// children are <row .../> elements carrying all data in attributes. Elements
// other than "row" (the XML declaration, comments, the root open and close
// tags) are structural and skipped. Memory use is bounded by the largest
// single element, not the file. Malformed input raises std::runtime_error
// with the byte offset of the problem.
class XmlRowReader {
public:
    explicit XmlRowReader(std::istream& in) : in_(&in) {}

    // Scans forward to the next <row> element. Returns false at end of input.
    bool next(XmlRow& row) {
        for (;;) {
            discard_consumed();
            skip_whitespace();
            if (!ensure(1)) return false;
            std::size_t tag_offset = offset_of(pos_);
            if (buf_[pos_] != '<')
                fail("text outside of tags", tag_offset);
            if (!ensure(2)) fail("unexpected end of input inside a tag", tag_offset);

            char c = buf_[pos_ + 1];
            if (c == '?') {
                skip_until("?>", tag_offset);
            } else if (c == '!') {
                if (ensure(4) && buf_.compare(pos_ + 1, 3, "!--") == 0)
                    skip_until("-->", tag_offset);
                else
                    skip_until(">", tag_offset);
            } else if (c == '/') {
                skip_until(">", tag_offset);
            } else {
                if (parse_element(row, tag_offset)) return true;
            }
        }
    }

private:
    static constexpr std::size_t kChunk = 1 << 16;

    std::istream* in_;
    std::string buf_;
    std::size_t pos_ = 0;      // scan position within buf_
    std::size_t dropped_ = 0;  // bytes discarded before buf_[0]

    std::size_t offset_of(std::size_t p) const { return dropped_ + p; }

    [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
        throw std::runtime_error("malformed XML: " + what + " at byte " +
                                 std::to_string(offset));
    }

    void discard_consumed() {
        if (pos_ == 0) return;
        buf_.erase(0, pos_);
        dropped_ += pos_;
        pos_ = 0;
    }

    // Makes at least n bytes available past pos_, reading more input as
    // needed. Returns false when the stream ends first.
    bool ensure(std::size_t n) {
        while (buf_.size() - pos_ < n) {
            std::size_t old = buf_.size();
            buf_.resize(old + kChunk);
            in_->read(buf_.data() + old, static_cast<std::streamsize>(kChunk));
            buf_.resize(old + static_cast<std::size_t>(in_->gcount()));
            if (buf_.size() == old) return false;
        }
        return true;
    }

    void skip_whitespace() {
        for (;;) {
            while (pos_ < buf_.size() &&
                   (buf_[pos_] == ' ' || buf_[pos_] == '\t' || buf_[pos_] == '\r' ||
                    buf_[pos_] == '\n'))
                ++pos_;
            if (pos_ < buf_.size() || !ensure(1)) return;
        }
    }

    // Advances past the next occurrence of the marker. The offset names the
    // construct being skipped when input ends before the marker appears.
    void skip_until(std::string_view marker, std::size_t tag_offset) {
        for (;;) {
            std::size_t found = buf_.find(marker.data(), pos_, marker.size());
            if (found != std::string::npos) {
                pos_ = found + marker.size();
                return;
            }
            // Keep marker.size()-1 trailing bytes so a split marker is found.
            pos_ = buf_.size() > marker.size() ? buf_.size() - marker.size() + 1 : pos_;
            if (!ensure(marker.size() + 1) && buf_.find(marker.data(), pos_, marker.size()) ==
                                                  std::string::npos)
                fail("unterminated construct opened", tag_offset);
        }
    }

    char peek_filled(std::size_t tag_offset) {
        if (pos_ >= buf_.size() && !ensure(1))
            fail("unexpected end of input inside the tag opened", tag_offset);
        return buf_[pos_];
    }

    static bool is_name_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '-' || c == '.' || c == ':';
    }

    // Parses one open or self-closing element starting at '<'. Fills row and
    // returns true when the element is named "row".
    bool parse_element(XmlRow& row, std::size_t tag_offset) {
        ++pos_;
        std::string name;
        while (is_name_char(peek_filled(tag_offset))) name.push_back(buf_[pos_++]);
        if (name.empty()) fail("element name missing in the tag opened", tag_offset);

        row.attrs.clear();
        row.offset = tag_offset;
        for (;;) {
            while (true) {
                char c = peek_filled(tag_offset);
                if (c == ' ' || c == '\t' || c == '\r' || c == '\n') ++pos_;
                else break;
            }
            char c = peek_filled(tag_offset);
            if (c == '>') {
                ++pos_;
                break;
            }
            if (c == '/') {
                ++pos_;
                if (peek_filled(tag_offset) != '>')
                    fail("expected '>' after '/' in the tag opened", tag_offset);
                ++pos_;
                break;
            }
            if (!is_name_char(c)) fail("unexpected character in the tag opened", tag_offset);

            std::string attr;
            while (is_name_char(peek_filled(tag_offset))) attr.push_back(buf_[pos_++]);
            while (peek_filled(tag_offset) == ' ' || buf_[pos_] == '\t') ++pos_;
            if (peek_filled(tag_offset) != '=')
                fail("attribute '" + attr + "' lacks '=' in the tag opened", tag_offset);
            ++pos_;
            while (peek_filled(tag_offset) == ' ' || buf_[pos_] == '\t') ++pos_;
            char quote = peek_filled(tag_offset);
            if (quote != '"' && quote != '\'')
                fail("attribute '" + attr + "' lacks a quoted value in the tag opened",
                     tag_offset);
            ++pos_;
            std::size_t value_start = pos_;
            while (peek_filled(tag_offset) != quote) ++pos_;
            std::string_view raw(buf_.data() + value_start, pos_ - value_start);
            ++pos_;
            try {
                row.attrs.emplace_back(std::move(attr), decode_entities(raw));
            } catch (const std::invalid_argument& e) {
                fail(std::string(e.what()) + " in the attribute value of the tag opened",
                     tag_offset);
            }
        }
        return name == "row";
    }
};

} // namespace cops
