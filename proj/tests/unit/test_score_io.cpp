#include <doctest.h>

#include "fretsolve/errors.h"
#include "fretsolve/optimizer.h"
#include "fretsolve/score_io.h"

using namespace fretsolve;

TEST_CASE("composition text") {
  const Composition c = parse_composition("key: E major\ntempo: 90\n# intro\nE2 B2 E3 G#3 B3 E4 @2\nA2 E3 # open A\n");
  REQUIRE(c.key);
  CHECK(c.key->tonic.pc == 4);
  CHECK(c.tempo_bpm == 90.0);
  REQUIRE(c.chords.size() == 2);
  CHECK(c.chords[0].pitches.size() == 6);
  CHECK(c.chords[0].numbers() == std::vector<int>{40, 47, 52, 56, 59, 64});
  CHECK(c.chords[0].duration_ms == doctest::Approx(2.0 * 60000.0 / 90.0));
  CHECK(c.chords[1].pitches.size() == 2);
  CHECK(parse_composition(format_composition(c)) == c);

  const Composition plain = parse_composition("C4 E4 G4\n");
  CHECK_FALSE(plain.key);
  CHECK(plain.chords[0].duration_ms == 500.0);
}

TEST_CASE("composition errors carry positions") {
  try {
    parse_composition("C4 E4 G4 X9\n");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 10);
    CHECK(std::string(e.what()).find("token 4") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_composition(""), ParseError);
  CHECK_THROWS_AS(parse_composition("# nothing\n"), ParseError);
  CHECK_THROWS_AS(parse_composition("key: H major\nC4\n"), ParseError);
  CHECK_THROWS_AS(parse_composition("tempo: 0\nC4\n"), ParseError);
  CHECK_THROWS_AS(parse_composition("tempo: 90\ntempo: 80\nC4\n"), ParseError);
  CHECK_THROWS_AS(parse_composition("C4 @x\n"), ParseError);
  CHECK_THROWS_AS(parse_composition("C4 D4 E4 F4 G4 A4 B4\n"), ParseError);
  CHECK_THROWS_AS(parse_composition("e'\n"), ParseError);
}

TEST_CASE("tab rendering") {
  const Tablature tab{standard_tuning(), {ChordShape({0, 0, 0, 0, 0, 0})}, {}};
  const std::string text = render_tab(tab);
  CHECK(text ==
        "# fretsolve-v1\n"
        "tuning: E-A-d-g-b-e' 55545\n"
        "e' |-0--|\n"
        "b  |-0--|\n"
        "g  |-0--|\n"
        "d  |-0--|\n"
        "A  |-0--|\n"
        "E  |-0--|\n");

  std::vector<ChordShape> shapes;
  for (int i = 0; i < 5; ++i) shapes.push_back(ChordShape({kMuted, 12 + i, 2, 0, kMuted, i}));
  const Tablature wide{*find_named_tuning("drop-d"), shapes, {"riff"}};
  const std::string body = render_tab(wide);
  CHECK(body.find("# riff\n") != std::string::npos);
  CHECK(body.find("D  |-------------|----|\n") != std::string::npos);
  CHECK(body.find("A  |-12-13-14-15-|-16-|\n") != std::string::npos);
  CHECK(parse_tab(body) == wide);
  CHECK(render_tab(parse_tab(body)) == body);

  const Tablature empty{standard_tuning(), {}, {}};
  CHECK(parse_tab(render_tab(empty)) == empty);
}

TEST_CASE("tab round trip for optimiser output") {
  Composition comp = parse_composition("key: A minor\nA2 E3 A3 C4 E4\nD3 A3 D4 F4\nE2 B2 E3 G#3 B3 E4\n");
  const auto results = joint_optimize(comp, SearchSpace::named(standard_tuning(), {0, 2}), {}, 3);
  for (const OptimizationResult& r : results) {
    const std::string text = render_tab(r);
    const Tablature back = parse_tab(text);
    CHECK(back.tuning == r.tuning);
    CHECK(back.shapes == r.fingering);
    CHECK(render_tab(back) == text);
  }
}

TEST_CASE("tab errors") {
  const std::string good = render_tab(Tablature{standard_tuning(), {ChordShape({0, 2, 2, 1, 0, 0})}, {}});
  CHECK_THROWS_AS(parse_tab(good.substr(good.find('\n') + 1)), ParseError);

  std::string no_header = good;
  no_header.erase(no_header.find("tuning:"), no_header.find('\n', no_header.find("tuning:")) - no_header.find("tuning:") + 1);
  try {
    parse_tab(no_header);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("tuning") != std::string::npos);
  }

  std::string mismatch = good;
  mismatch.replace(mismatch.find("55545"), 5, "75545");
  CHECK_THROWS_AS(parse_tab(mismatch), ParseError);

  std::string misaligned = good;
  misaligned.replace(misaligned.find("g  |-1--|"), 9, "g  |--1-|");
  try {
    parse_tab(misaligned);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("misaligned") != std::string::npos);
  }

  std::string ragged = good;
  ragged.replace(ragged.find("d  |-2--|"), 9, "d  |-2---|");
  CHECK_THROWS_AS(parse_tab(ragged), ParseError);

  std::string too_high = good;
  too_high.replace(too_high.find("A  |-2--|"), 9, "A  |-25-|");
  CHECK_THROWS_AS(parse_tab(too_high), BoundsError);

  std::string wrong_label = good;
  wrong_label.replace(wrong_label.find("b  |"), 4, "c  |");
  CHECK_THROWS_AS(parse_tab(wrong_label), ParseError);

  std::string five_lines = good.substr(0, good.rfind("E  |"));
  CHECK_THROWS_AS(parse_tab(five_lines), ParseError);
}
