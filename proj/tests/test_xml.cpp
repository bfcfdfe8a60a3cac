#include "doctest.h"

#include "r2p2p/error.hpp"
#include "r2p2p/xml.hpp"

using namespace r2p2p;

namespace {

ErrorCode code_of(std::string_view doc) {
  try {
    xml::parse(doc);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("document parsed: " << doc);
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("tree with attributes, text and nesting") {
  const auto root = xml::parse(
      "<?xml version=\"1.0\"?>\n<!-- c --><a x='1' y=\"&lt;2&gt;\"><b>hi</b> <c/><?pi x?></a>\n");
  CHECK(root.name == "a");
  REQUIRE(root.attributes.size() == 2);
  CHECK(root.attribute("y")->value == "<2>");
  CHECK(root.attribute("z") == nullptr);
  REQUIRE(root.children.size() == 2);
  CHECK(root.children[0].text == "hi");
  CHECK(root.children[1].name == "c");
  CHECK(root.text == " ");
}

TEST_CASE("entities, character references and CDATA decode") {
  const auto root = xml::parse("<t>&amp;&apos;&quot;&#65;&#x263A;<![CDATA[<&>]]></t>");
  CHECK(root.text == "&'\"A\xE2\x98\xBA<&>");
}

TEST_CASE("line ends normalize to LF but &#13; survives") {
  CHECK(xml::parse("<t>a\r\nb\rc</t>").text == "a\nb\nc");
  CHECK(xml::parse("<t>a&#13;\nb</t>").text == "a\r\nb");
}

TEST_CASE("escape_text round-trips through the reader") {
  const std::string nasty = "a<b>&c]]>d\"e'f\r\ng\t";
  CHECK(xml::parse("<t>" + xml::escape_text(nasty) + "</t>").text == nasty);
  CHECK(xml::parse("<t a=\"" + xml::escape_attribute(nasty) + "\"/>").attribute("a")->value ==
        nasty);
}

TEST_CASE("well-formedness violations are MalformedXml") {
  for (const char* doc : {"", "   ", "<a>", "<a></b>", "<a><b></a></b>", "<a/><b/>", "text",
                          "<a>&bogus;</a>", "<a>&#0;</a>", "<a>&#xD800;</a>", "<a x=1/>",
                          "<a x='1' x='2'/>", "<a>]]></a>", "<!DOCTYPE a><a/>", "<a><!-- -- --></a>",
                          "<a>\x01</a>", "<a>\xC3</a>", "<a>\xC0\x80</a>", "<1a/>", "<a/>junk",
                          "<a><![CDATA[x</a>"}) {
    CAPTURE(doc);
    CHECK(code_of(doc) == ErrorCode::MalformedXml);
  }
}

TEST_CASE("deep nesting is bounded") {
  std::string doc;
  for (int i = 0; i < 300; ++i) doc += "<a>";
  for (int i = 0; i < 300; ++i) doc += "</a>";
  CHECK(code_of(doc) == ErrorCode::MalformedXml);
}

TEST_CASE("pull reader reports depth and drains to the end") {
  xml::Reader r("<a><b>x</b><c/></a>");
  CHECK(r.next().kind == xml::EventKind::StartElement);
  auto b = r.next();
  CHECK(b.name == "b");
  CHECK(r.depth() == 2);
  auto sub = xml::read_subtree(r, std::move(b));
  CHECK(sub.text == "x");
  CHECK(r.next().name == "c");
  CHECK(r.next().kind == xml::EventKind::EndElement);
  CHECK(r.next().kind == xml::EventKind::EndElement);
  CHECK(r.next().kind == xml::EventKind::EndOfDocument);
}

TEST_CASE("is_blank") {
  CHECK(xml::is_blank(""));
  CHECK(xml::is_blank(" \t\r\n"));
  CHECK_FALSE(xml::is_blank(" x "));
}
