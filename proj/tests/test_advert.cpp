#include "doctest.h"

#include "oracles.hpp"
#include "r2p2p/advert.hpp"
#include "r2p2p/error.hpp"

using namespace r2p2p;

namespace {

DocumentAdvertisement sample() {
  DocumentAdvertisement a;
  a.id = "urn:r2p2p:doc-1";
  a.title = "Basics of Image Processing";
  a.summary = "An introduction";
  a.author_id = "alice";
  a.content_hash = "ab12";
  a.rating = RatingElement{12, Level::C, Descriptor::G};
  return a;
}

std::string with_rating(std::string_view rating_xml) {
  return "<?xml version=\"1.0\"?>\n<r2p2p:DocumentAdvertisement xmlns:r2p2p=\"urn:r2p2p\">"
         "<Id>urn:r2p2p:x</Id><Title>T</Title><Summary></Summary><Author>a</Author>"
         "<ContentHash>00</ContentHash><Revision>1</Revision>" +
         std::string(rating_xml) + "</r2p2p:DocumentAdvertisement>";
}

ErrorCode parse_error(const std::string& xml) {
  try {
    parse_advertisement(xml);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parsed: " << xml);
  return ErrorCode::IoError;
}

ErrorCode extract_error(const std::string& xml) {
  try {
    extract_rating(xml);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("extracted: " << xml);
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("serialize emits the rating subtree in fixed order") {
  const auto xml = serialize_advertisement(sample());
  CHECK(xml ==
        "<?xml version=\"1.0\"?>\n<r2p2p:DocumentAdvertisement xmlns:r2p2p=\"urn:r2p2p\">"
        "<Id>urn:r2p2p:doc-1</Id><Title>Basics of Image Processing</Title>"
        "<Summary>An introduction</Summary><Author>alice</Author><ContentHash>ab12</ContentHash>"
        "<Revision>1</Revision><Rating><Citations>12</Citations><Level>C</Level>"
        "<Descriptor>G</Descriptor></Rating></r2p2p:DocumentAdvertisement>");
  CHECK(parse_advertisement(xml) == sample());
}

TEST_CASE("unrated advertisement has no Rating element") {
  auto a = sample();
  a.rating.reset();
  const auto xml = serialize_advertisement(a);
  CHECK(xml.find("<Rating>") == std::string::npos);
  CHECK(parse_advertisement(xml) == a);
  CHECK_FALSE(extract_rating(xml).has_value());
}

TEST_CASE("equal values serialize identically") {
  CHECK(serialize_advertisement(sample()) == serialize_advertisement(sample()));
}

TEST_CASE("closed code sets") {
  CHECK(parse_error(with_rating("<Rating><Citations>1</Citations><Level>Z</Level>"
                                "<Descriptor>G</Descriptor></Rating>")) == ErrorCode::InvalidCode);
  CHECK(parse_error(with_rating("<Rating><Citations>1</Citations><Level>C</Level>"
                                "<Descriptor>H</Descriptor></Rating>")) == ErrorCode::InvalidCode);
  CHECK(parse_error(with_rating("<Rating><Citations>1</Citations><Level>c</Level>"
                                "<Descriptor>G</Descriptor></Rating>")) == ErrorCode::InvalidCode);
  CHECK(parse_error(with_rating("<Rating><Citations>1</Citations><Level>CD</Level>"
                                "<Descriptor>G</Descriptor></Rating>")) == ErrorCode::InvalidCode);
}

TEST_CASE("citations must be canonical decimal") {
  for (const char* bad : {"-3", "", "03", "+3", " 3", "3 ", "1e3", "0x10", "9223372036854775808",
                          "99999999999999999999"}) {
    CAPTURE(bad);
    CHECK(parse_error(with_rating(std::string("<Rating><Citations>") + bad +
                                  "</Citations><Level>C</Level><Descriptor>G</Descriptor>"
                                  "</Rating>")) == ErrorCode::InvalidCitations);
  }
  CHECK(parse_citations("0") == 0);
  CHECK(parse_citations("9223372036854775807") == kMaxCitations);
}

TEST_CASE("citations acceptance matches the canonical-encoding oracle") {
  gen::Rng rng(11);
  static const std::string alphabet = "0123456789-+ x";
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    const auto len = gen::below(rng, 21);
    for (std::size_t j = 0; j < len; ++j) {
      s += gen::coin(rng, 0.9) ? alphabet[gen::below(rng, 10)] : alphabet[gen::below(rng, alphabet.size())];
    }
    CAPTURE(s);
    std::optional<std::uint64_t> value;
    try {
      value = parse_citations(s);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidCitations);
    }
    const bool accepted = value.has_value();
    if (value) CHECK(std::to_string(*value) == s);
    CHECK(accepted == oracle::is_canonical_decimal(s));
  }
}

TEST_CASE("missing and unexpected elements") {
  CHECK(parse_error(with_rating("<Rating><Citations>1</Citations><Level>C</Level></Rating>")) ==
        ErrorCode::MissingField);
  CHECK(extract_error(with_rating("<Rating><Citations>1</Citations><Level>C</Level></Rating>")) ==
        ErrorCode::MissingField);
  CHECK(parse_error(with_rating("<Extra/>")) == ErrorCode::UnexpectedElement);
  CHECK(parse_error(with_rating("<Title>again</Title>")) == ErrorCode::UnexpectedElement);
  CHECK(parse_error(with_rating("<Rating><Citations>1</Citations><Level>C</Level>"
                                "<Descriptor>G</Descriptor><Note/></Rating>")) ==
        ErrorCode::UnexpectedElement);
  auto no_title = with_rating("");
  no_title.replace(no_title.find("<Title>T</Title>"), 16, "");
  CHECK(parse_error(no_title) == ErrorCode::MissingField);
}

TEST_CASE("root and namespace checks") {
  CHECK(parse_error("<Other/>") == ErrorCode::UnexpectedElement);
  CHECK(parse_error("<r2p2p:DocumentAdvertisement><Id>x</Id></r2p2p:DocumentAdvertisement>") ==
        ErrorCode::MalformedXml);
  CHECK(parse_error("<r2p2p:DocumentAdvertisement xmlns:r2p2p=\"urn:r2p2p\"") ==
        ErrorCode::MalformedXml);
  CHECK(extract_error("<r2p2p:DocumentAdvertisement xmlns:r2p2p=\"urn:r2p2p\"><Rating>") ==
        ErrorCode::MalformedXml);
}

TEST_CASE("invalid field values") {
  auto bad_rev = with_rating("");
  bad_rev.replace(bad_rev.find("<Revision>1"), 11, "<Revision>0");
  CHECK(parse_error(bad_rev) == ErrorCode::InvalidField);
  auto bad_hash = with_rating("");
  bad_hash.replace(bad_hash.find(">00<"), 4, ">AB<");
  CHECK(parse_error(bad_hash) == ErrorCode::InvalidField);
  auto a = sample();
  a.title.clear();
  CHECK_THROWS_AS(serialize_advertisement(a), Error);
  a = sample();
  a.id = "has space";
  CHECK_THROWS_AS(serialize_advertisement(a), Error);
  a = sample();
  a.rating->level = static_cast<Level>('Q');
  try {
    serialize_advertisement(a);
    FAIL("serialized");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidRating);
  }
}

TEST_CASE("extract_rating reads the Rating subtree") {
  CHECK(extract_rating(serialize_advertisement(sample())) ==
        RatingElement{12, Level::C, Descriptor::G});
  CHECK(extract_rating(with_rating("<Rating><Citations>12</Citations><Level>C</Level>"
                                   "<Descriptor>G</Descriptor></Rating>")) ==
        RatingElement{12, Level::C, Descriptor::G});
}

TEST_CASE("any child order and blank separators parse to the same value") {
  const std::string xml =
      "<?xml version=\"1.0\"?>\n<r2p2p:DocumentAdvertisement xmlns:r2p2p=\"urn:r2p2p\">\n"
      "  <Rating>\n    <Descriptor>G</Descriptor><Level>C</Level><Citations>12</Citations>\n"
      "  </Rating>\n  <Revision>1</Revision><ContentHash>ab12</ContentHash>\n"
      "  <Author>alice</Author><Summary>An introduction</Summary>\n"
      "  <Title>Basics of Image Processing</Title><Id>urn:r2p2p:doc-1</Id>\n"
      "</r2p2p:DocumentAdvertisement>\n";
  CHECK(parse_advertisement(xml) == sample());
  CHECK(extract_rating(xml) == sample().rating);
  CHECK(serialize_advertisement(parse_advertisement(xml)) == serialize_advertisement(sample()));
}

TEST_CASE("round-trip and fixed point over generated advertisements") {
  gen::Rng rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const auto a = gen::advertisement(rng);
    const auto xml = serialize_advertisement(a);
    CAPTURE(xml);
    const auto back = parse_advertisement(xml);
    REQUIRE(back == a);
    CHECK(serialize_advertisement(back) == xml);
    CHECK(extract_rating(xml) == a.rating);
    if (back.rating) {
      CHECK(is_valid(back.rating->level));
      CHECK(is_valid(back.rating->descriptor));
    }
  }
}

TEST_CASE("extract_rating agrees with parse on mutated documents") {
  gen::Rng rng(77);
  static const std::vector<std::string> junk = {"<", ">", "&", "</Rating>", "<Rating>", "Z",
                                                "-", "0", "<Level>", " ", "\x01"};
  int both_ok = 0;
  for (int i = 0; i < 3000; ++i) {
    auto xml = serialize_advertisement(gen::advertisement(rng));
    const auto at = gen::below(rng, xml.size());
    if (gen::coin(rng)) {
      xml.insert(at, junk[gen::below(rng, junk.size())]);
    } else {
      xml.erase(at, 1 + gen::below(rng, 3));
    }
    std::optional<DocumentAdvertisement> parsed;
    std::optional<std::optional<RatingElement>> extracted;
    try {
      parsed = parse_advertisement(xml);
    } catch (const Error&) {
    }
    try {
      extracted = extract_rating(xml);
    } catch (const Error&) {
    }
    if (parsed) {
      CAPTURE(xml);
      REQUIRE(extracted.has_value());
      CHECK(*extracted == parsed->rating);
      CHECK(serialize_advertisement(parse_advertisement(serialize_advertisement(*parsed))) ==
            serialize_advertisement(*parsed));
      ++both_ok;
    }
  }
  CHECK(both_ok > 0);
}
