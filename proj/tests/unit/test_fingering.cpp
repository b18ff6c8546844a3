#include <doctest.h>

#include <random>

#include "fretsolve/errors.h"
#include "fretsolve/fingering.h"
#include "fretsolve/optimizer.h"
#include "oracles.h"

using namespace fretsolve;

namespace {

Chord chord_of(std::initializer_list<const char*> names) {
  Chord c;
  for (const char* n : names) c.pitches.push_back(parse_scientific_pitch(n));
  return c;
}

std::set<oracle::Frets> as_set(const std::vector<ChordShape>& shapes) {
  std::set<oracle::Frets> out;
  for (const ChordShape& s : shapes) out.insert(s.frets());
  return out;
}

}  // namespace

TEST_CASE("single pitches") {
  const auto low_e = enumerate_shapes(chord_of({"E2"}), standard_tuning());
  REQUIRE(low_e.size() == 1);
  CHECK(low_e[0] == ChordShape({0, kMuted, kMuted, kMuted, kMuted, kMuted}));
  // E3 sits on strings 1, 2 and 3 within 24 frets.
  CHECK(enumerate_shapes(chord_of({"E3"}), standard_tuning()).size() == 3);
  CHECK(enumerate_shapes(chord_of({"E5"}), standard_tuning()).size() == 3);
}

TEST_CASE("infeasible and unplayable chords") {
  CHECK_THROWS_AS(enumerate_shapes(chord_of({"E2", "F2"}), standard_tuning()), InfeasibleChordError);
  CHECK_THROWS_AS(enumerate_shapes(chord_of({"D2"}), standard_tuning()), UnplayableChordError);
  try {
    enumerate_shapes(chord_of({"C4", "C7"}), standard_tuning());
    FAIL("expected an error");
  } catch (const UnplayableChordError& e) {
    CHECK(e.pitch() == 96);
  }
  // Seven strings' worth of pitches, or a stretch no hand covers.
  CHECK_THROWS_AS(enumerate_shapes(chord_of({"E2", "E3", "E4", "E5"}), standard_tuning()), InfeasibleChordError);
}

TEST_CASE("open E major is the cheapest shape") {
  const auto shapes = enumerate_shapes(chord_of({"E2", "B2", "E3", "G#3", "B3", "E4"}), standard_tuning());
  REQUIRE_FALSE(shapes.empty());
  CHECK(std::find(shapes.begin(), shapes.end(), ChordShape({0, 2, 2, 1, 0, 0})) != shapes.end());
  for (const ChordShape& s : shapes) {
    CHECK(s.pitches(standard_tuning()) == std::vector<int>{40, 47, 52, 56, 59, 64});
  }
  for (std::size_t i = 1; i < shapes.size(); ++i) CHECK_FALSE(shape_order_less(shapes[i], shapes[i - 1]));
}

TEST_CASE("enumeration matches the injection oracle") {
  std::mt19937 rng(11);
  int compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Chord chord = oracle::random_chord(rng, 5);
    for (const NamedTuning& named : named_tunings()) {
      const std::set<oracle::Frets> expected = oracle::shapes(chord.numbers(), oracle::open_of(named.tuning));
      try {
        const auto got = enumerate_shapes(chord, named.tuning, 0);
        CHECK(as_set(got) == expected);
        CHECK(got.size() == expected.size());
        ++compared;
      } catch (const UnplayableChordError&) {
        CHECK(expected.empty());
      } catch (const InfeasibleChordError&) {
        CHECK(expected.empty());
      }
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("candidate cut keeps the best-ordered shapes") {
  const Chord c = chord_of({"A3", "C#4", "E4"});
  const auto all = enumerate_shapes(c, standard_tuning(), 0);
  const auto few = enumerate_shapes(c, standard_tuning(), 3);
  REQUIRE(all.size() > 3);
  REQUIRE(few.size() == 3);
  CHECK(std::equal(few.begin(), few.end(), all.begin()));
}
