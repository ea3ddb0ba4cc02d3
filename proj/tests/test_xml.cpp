#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "cops/xml.hpp"

using namespace cops;

namespace {

std::vector<XmlRow> scan_all(const std::string& doc) {
    std::istringstream in(doc);
    XmlRowReader reader(in);
    std::vector<XmlRow> rows;
    XmlRow row;
    while (reader.next(row)) rows.push_back(row);
    return rows;
}

std::string message_of(const std::string& doc) {
    std::istringstream in(doc);
    XmlRowReader reader(in);
    XmlRow row;
    try {
        while (reader.next(row)) {
        }
    } catch (const std::runtime_error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(DecodeEntities, NamedEntities) {
    EXPECT_EQ(decode_entities("a &amp; b"), "a & b");
    EXPECT_EQ(decode_entities("&lt;tag&gt;"), "<tag>");
    EXPECT_EQ(decode_entities("&quot;x&quot; &apos;y&apos;"), "\"x\" 'y'");
    EXPECT_EQ(decode_entities("no entities"), "no entities");
    EXPECT_EQ(decode_entities(""), "");
}

TEST(DecodeEntities, NumericReferences) {
    EXPECT_EQ(decode_entities("&#65;&#66;"), "AB");
    EXPECT_EQ(decode_entities("&#x41;&#X42;"), "AB");
    EXPECT_EQ(decode_entities("&#10;"), "\n");
    // Two and three byte UTF-8: U+03BB and U+20AC.
    EXPECT_EQ(decode_entities("&#955;"), "\xCE\xBB");
    EXPECT_EQ(decode_entities("&#x20AC;"), "\xE2\x82\xAC");
    // Four byte UTF-8: U+1F600.
    EXPECT_EQ(decode_entities("&#x1F600;"), "\xF0\x9F\x98\x80");
}

TEST(DecodeEntities, RejectsMalformedEntities) {
    EXPECT_THROW(decode_entities("&bogus;"), std::invalid_argument);
    EXPECT_THROW(decode_entities("dangling &amp"), std::invalid_argument);
    EXPECT_THROW(decode_entities("&#;"), std::invalid_argument);
    EXPECT_THROW(decode_entities("&#x;"), std::invalid_argument);
    EXPECT_THROW(decode_entities("&#12a;"), std::invalid_argument);
    EXPECT_THROW(decode_entities("&#xD800;"), std::invalid_argument);
    EXPECT_THROW(decode_entities("&#x110000;"), std::invalid_argument);
    EXPECT_THROW(decode_entities("&#999999999999;"), std::invalid_argument);
}

TEST(XmlRowReader, ScansRowsAndSkipsStructure) {
    std::string doc = "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"
                      "<!-- a comment with <row Id=\"99\"/> inside -->\n"
                      "<posts>\n"
                      "  <row Id=\"1\" Score=\"-3\" Body=\"a &amp; b\" />\n"
                      "  <row Id='2' Title='single quotes'/>\n"
                      "</posts>\n";
    auto rows = scan_all(doc);
    ASSERT_EQ(rows.size(), 2u);

    ASSERT_EQ(rows[0].attrs.size(), 3u);
    EXPECT_EQ(rows[0].attrs[0].first, "Id");
    EXPECT_EQ(*rows[0].find("Id"), "1");
    EXPECT_EQ(*rows[0].find("Score"), "-3");
    EXPECT_EQ(*rows[0].find("Body"), "a & b");
    EXPECT_EQ(rows[0].find("Missing"), nullptr);

    EXPECT_EQ(*rows[1].find("Id"), "2");
    EXPECT_EQ(*rows[1].find("Title"), "single quotes");
}

TEST(XmlRowReader, ReportsByteOffsets) {
    std::string doc = "<?xml version=\"1.0\"?>\n<posts>\n  <row Id=\"1\" />\n  <row Id=\"2\"/>\n"
                      "</posts>\n";
    auto rows = scan_all(doc);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].offset, doc.find("<row"));
    EXPECT_EQ(rows[1].offset, doc.find("<row", rows[0].offset + 1));
}

TEST(XmlRowReader, AttributeWhitespaceAndNonSelfClosingRows) {
    std::string doc = "<posts><row  Id = \"7\"   Score=\"0\" ></row><row Id=\"8\"/></posts>";
    auto rows = scan_all(doc);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(*rows[0].find("Id"), "7");
    EXPECT_EQ(*rows[0].find("Score"), "0");
    EXPECT_EQ(*rows[1].find("Id"), "8");
}

TEST(XmlRowReader, EmptyInputAndNoRows) {
    EXPECT_TRUE(scan_all("").empty());
    EXPECT_TRUE(scan_all("   \n\t  ").empty());
    EXPECT_TRUE(scan_all("<?xml version=\"1.0\"?><posts></posts>").empty());
}

TEST(XmlRowReader, MalformedInputNamesTheByteOffset) {
    // Unterminated tag: offset of its '<'.
    std::string doc = "<posts>\n<row Id=\"1\"";
    std::string msg = message_of(doc);
    EXPECT_NE(msg.find("byte 8"), std::string::npos) << msg;

    // Text outside of tags.
    msg = message_of("<posts>stray</posts>");
    EXPECT_NE(msg.find("byte 7"), std::string::npos) << msg;

    // Attribute without a value.
    msg = message_of("<posts><row Id></row></posts>");
    EXPECT_NE(msg.find("'Id'"), std::string::npos) << msg;
    EXPECT_NE(msg.find("byte 7"), std::string::npos) << msg;

    // Unquoted attribute value.
    msg = message_of("<posts><row Id=1/></posts>");
    EXPECT_NE(msg.find("quoted"), std::string::npos) << msg;

    // Unterminated comment.
    msg = message_of("<posts><!-- never closed");
    EXPECT_NE(msg.find("byte 7"), std::string::npos) << msg;

    // Bad entity inside an attribute value.
    msg = message_of("<posts><row Body=\"x &nope; y\"/></posts>");
    EXPECT_NE(msg.find("nope"), std::string::npos) << msg;
    EXPECT_NE(msg.find("byte 7"), std::string::npos) << msg;
}

TEST(XmlRowReader, StreamsPastTheChunkSize) {
    // The reader fills its buffer in 64 KiB chunks; rows and one oversized
    // attribute value must survive crossing those boundaries.
    std::string doc = "<posts>\n";
    std::string big(70000, 'x');
    doc += "<row Id=\"0\" Body=\"" + big + "\"/>\n";
    for (int i = 1; i <= 3000; ++i)
        doc += "<row Id=\"" + std::to_string(i) + "\" Body=\"b &#65; " +
               std::string(40, 'y') + "\"/>\n";
    doc += "</posts>\n";

    auto rows = scan_all(doc);
    ASSERT_EQ(rows.size(), 3001u);
    EXPECT_EQ(*rows[0].find("Body"), big);
    EXPECT_EQ(*rows[1].find("Id"), "1");
    EXPECT_EQ(*rows[3000].find("Id"), "3000");
    EXPECT_EQ(*rows[2000].find("Body"), "b A " + std::string(40, 'y'));
}
