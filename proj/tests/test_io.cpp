#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "modsel/csv_ingest.hpp"
#include "modsel/dataset_io.hpp"
#include "modsel/errors.hpp"
#include "modsel/info.hpp"

using namespace modsel;

namespace {
IngestSpec spec_for(const std::string& label, Binning b = Binning::equal_frequency(8)) {
  IngestSpec s;
  s.label_column = label;
  s.binning = b;
  return s;
}
}  // namespace

TEST_SUITE("io") {
  TEST_CASE("JSON-lines round trip") {
    for (const auto& d : {fx::duplicate_best(), fx::random_samples(4, 3, 2, 50, 1)}) {
      std::stringstream s;
      write_dataset(s, d);
      const auto back = read_dataset(s);
      CHECK(back.n_samples() == d.n_samples());
      CHECK(back.weighted() == d.weighted());
      CHECK(back.population() == d.population());
      for (std::uint64_t m = 0; m < (1u << d.n_modalities()); ++m)
        CHECK(mutual_information(back, ModalitySubset::from_mask(m)).nats ==
              mutual_information(d, ModalitySubset::from_mask(m)).nats);
      std::stringstream again;
      write_dataset(again, back);
      std::stringstream first;
      write_dataset(first, d);
      CHECK(again.str() == first.str());
    }
  }

  TEST_CASE("malformed datasets") {
    auto read = [](const std::string& text) {
      std::istringstream in(text);
      return read_dataset(in);
    };
    CHECK_THROWS_AS(read(""), DataError);
    CHECK_THROWS_AS(read("{\"format\":\"other\"}\n"), DataError);
    const std::string header =
        R"({"format":"modsel-jsonl","version":1,"k":1,"alphabets":[2],"label_alphabet":2,"n":2})"
        "\n";
    CHECK_THROWS_AS(read(header + R"({"x":[0],"y":1})" "\n"), DataError);
    CHECK_THROWS_AS(read(header + R"({"x":[0],"y":1})" "\n" R"({"x":[5],"y":1})" "\n"), DataError);
    CHECK_THROWS_AS(read(header + "{\"x\":[0],\"y\":1}\nnot json\n"), DataError);
    CHECK_NOTHROW(read(header + "{\"x\":[0],\"y\":1}\n{\"x\":[1],\"y\":0}\n"));
  }

  TEST_CASE("categorical CSV") {
    const auto r = ingest_csv_text("color,shape,label\nred,box,a\nblue,box,b\nred,ball,a\n", spec_for("label"));
    CHECK(r.data.n_samples() == 3);
    CHECK(r.data.n_modalities() == 2);
    CHECK(r.data.alphabet(0) == 2);
    CHECK(r.data.alphabet(1) == 2);
    CHECK(r.data.label_alphabet() == 2);
    CHECK(r.data.value(1, 0) == 1);
    CHECK(r.mapping["modalities"][0]["encodings"][0]["values"][0] == "red");
  }

  TEST_CASE("constant column carries no information") {
    const auto r = ingest_csv_text("c,x,y\n1,0,0\n1,1,1\n1,0,1\n1,1,0\n", spec_for("y"));
    CHECK(r.data.alphabet(0) == 1);
    CHECK(mutual_information(r.data, {0}).nats == 0.0);
  }

  TEST_CASE("equal-frequency binning") {
    std::ostringstream csv;
    csv << "v,y\n";
    for (int i = 0; i < 103; ++i) csv << (i * 37 % 103) * 0.5 << "," << (i % 2) << "\n";
    const auto r = ingest_csv_text(csv.str(), spec_for("y", Binning::equal_frequency(4)));
    REQUIRE(r.data.alphabet(0) == 4);
    std::map<std::uint32_t, int> counts;
    for (auto v : r.data.column(0)) ++counts[v];
    for (auto [bin, c] : counts) CHECK(std::abs(c - 103.0 / 4) <= 1.0);
    // Bins are ordered by value.
    CHECK(r.mapping["modalities"][0]["encodings"][0]["type"] == "binned");
  }

  TEST_CASE("ties share a bin") {
    const auto r = ingest_csv_text("v,y\n1.5,0\n1.5,1\n1.5,0\n1.5,1\n2.5,0\n3.5,1\n4.5,0\n5.5,1\n",
                                   spec_for("y", Binning::equal_frequency(2)));
    for (int i = 1; i < 4; ++i) CHECK(r.data.value(i, 0) == r.data.value(0, 0));
  }

  TEST_CASE("column groups") {
    IngestSpec s = spec_for("y");
    s.groups = {{"a", "b"}, {"c"}};
    const auto r = ingest_csv_text("a,b,c,y\n0,0,1,0\n0,1,1,1\n0,0,0,1\n1,1,0,0\n", s);
    CHECK(r.data.n_modalities() == 2);
    CHECK(r.data.alphabet(0) == 3);
    CHECK(r.mapping["modalities"][0]["tuples"].size() == 3);
    s.groups = {{"a", "b"}, {"b"}};
    CHECK_THROWS_AS(ingest_csv_text("a,b,c,y\n0,0,1,0\n", s), InvalidArgument);
  }

  TEST_CASE("quoted fields") {
    const auto r = ingest_csv_text("name,y\n\"a, b\",0\nc,1\n\"a, b\",1\n", spec_for("y"));
    CHECK(r.data.alphabet(0) == 2);
    CHECK(r.mapping["modalities"][0]["encodings"][0]["values"][0] == "a, b");
  }

  TEST_CASE("CSV errors") {
    CHECK_THROWS_AS(ingest_csv_text("", spec_for("y")), DataError);
    CHECK_THROWS_AS(ingest_csv_text("a,y\n", spec_for("y")), DataError);
    CHECK_THROWS_AS(ingest_csv_text("a,b\n1,2\n", spec_for("y")), DataError);
    CHECK_THROWS_AS(ingest_csv_text("a,y\n1,2,3\n", spec_for("y")), DataError);
    CHECK_THROWS_AS(ingest_csv_text("a,y\n0.5,0\n1.25,1\n", spec_for("y", Binning::none())), DataError);
    CHECK_NOTHROW(ingest_csv_text("a,y\n3,0\n1,1\n", spec_for("y", Binning::none())));
    CHECK_THROWS_AS(Binning::parse("equal_frequency:1"), InvalidArgument);
    CHECK(Binning::parse("equal_frequency:16").bins == 16);
    CHECK_THROWS_AS(ingest_csv(spec_for("y")), DataError);
  }
}
