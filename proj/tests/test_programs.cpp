#include <doctest.h>

#include <memory>

#include "pgspi/io.hpp"
#include "support.hpp"

using namespace pgspi;
using namespace pgspi::geom;
using testing::constant;
using testing::match;
using testing::P;
using testing::R;

namespace {

const std::vector<std::string> kSlots{"Slot1", "Slot2", "Slot3"};

Outcome joint(const Game& g, const std::string& a, const std::string& b) {
  return Outcome::pure(g.joint_index({a, b}));
}

// Mismatched slots go to (Slot3, Slot3).
RenegPtr slot3_reneg(const Game& g) {
  std::vector<std::pair<Outcome, Outcome>> rules;
  for (const auto& a : kSlots) {
    for (const auto& b : kSlots) {
      if (a != b) rules.emplace_back(joint(g, a, b), joint(g, "Slot3", "Slot3"));
    }
  }
  return std::make_shared<RenegFunction>("to_slot3", rules);
}

// Mismatches go to a fixed coordinated outcome.
RenegPtr target_reneg(const Game& g, const std::string& name, const std::string& slot) {
  std::vector<std::pair<Outcome, Outcome>> rules;
  for (const auto& a : kSlots) {
    for (const auto& b : kSlots) {
      if (a != b) rules.emplace_back(joint(g, a, b), joint(g, slot, slot));
    }
  }
  return std::make_shared<RenegFunction>(name, rules);
}

SvrPtr wildcard(const std::string& name, Region r) {
  return std::make_shared<SVRFunction>(
      name, std::vector<SvrRule>{{CounterpartPattern{}, std::nullopt, RegionSpec::fixed(r)}});
}

// Anchored box: everything that weakly improves on the default outcome.
SvrPtr improving(const std::string& name) {
  return std::make_shared<SVRFunction>(
      name, std::vector<SvrRule>{{CounterpartPattern{}, std::nullopt,
                                  RegionSpec::box({{Bound::at_default()}, {Bound::at_default()}},
                                                  {{}, {}})}});
}

// Singleton regions reproducing a point-valued renegotiation function.
SvrPtr singleton_svr(const RenegFunction& r, const Game& g) {
  std::vector<SvrRule> rules;
  for (std::size_t j = 0; j < g.joint_count(); ++j) {
    Outcome a = Outcome::pure(j);
    Point u = to_point(payoff(g, r.apply(a)));
    rules.push_back({CounterpartPattern{}, a, RegionSpec::fixed(Region::from_polygon(Polygon::point(u)))});
  }
  return std::make_shared<SVRFunction>(r.name() + "_svr", rules);
}

PayoffVector run(const std::vector<Program>& profile, const Game& g,
                 const SelectionFunction& d = {}) {
  return payoff(g, evaluate(profile, g, d));
}

}  // namespace

TEST_CASE("fingerprints are canonical") {
  Game g = testing::scheduling();
  CHECK(constant("Slot1").fingerprint() == constant("Slot1").fingerprint());
  CHECK(constant("Slot1").fingerprint() != constant("Slot2").fingerprint());
  Program a = Program::csr(BaseProgram::constant("Slot1"), improving("rn"));
  Program b = Program::csr(BaseProgram::constant("Slot1"), improving("rn"));
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a == b);
  // names are not part of the fingerprint, structure is
  CHECK(improving("x")->fingerprint() == improving("y")->fingerprint());
  CHECK(Program::csr(BaseProgram::constant("Slot2"), improving("rn")).fingerprint() !=
        a.fingerprint());
  CHECK(Program::icsr(BaseProgram::constant("Slot1"), {improving("rn")}).fingerprint() !=
        a.fingerprint());
  CHECK(Program::reneg(BaseProgram::constant("Slot1"), slot3_reneg(g)).fingerprint() !=
        constant("Slot1").fingerprint());
}

TEST_CASE("example 1 base programs") {
  Game g = testing::scheduling();
  Program p2c = match(constant("Slot1"), "Slot1", constant("Slot2"));
  Outcome o = evaluate(std::vector<Program>{constant("Slot1"), p2c}, g, {});
  CHECK(o == joint(g, "Slot1", "Slot1"));
  CHECK(payoff(g, o) == PayoffVector{R(3), R(1)});
  CHECK(run({constant("Slot1"), constant("Slot2")}, g) == PayoffVector{R(0), R(0)});
  // p2c against anything else plays Slot2
  CHECK(run({constant("Slot3"), p2c}, g) == PayoffVector{R(0), R(0)});
}

TEST_CASE("example 2 renegotiation") {
  Game g = testing::scheduling();
  auto r = slot3_reneg(g);
  std::vector<Program> prof{Program::reneg(BaseProgram::constant("Slot1"), r),
                            Program::reneg(BaseProgram::constant("Slot2"), r)};
  EvalTrace t;
  Outcome o = evaluate(prof, g, {}, &t);
  CHECK(t.family == "reneg");
  CHECK(t.agreed);
  CHECK(*t.default_outcome == joint(g, "Slot1", "Slot2"));
  CHECK(payoff(g, o) == PayoffVector{R(1), R(1)});
}

TEST_CASE("reneg disagreement and mixed profiles") {
  Game g = testing::scheduling();
  auto r3 = slot3_reneg(g);
  auto r1 = target_reneg(g, "to_slot1", "Slot1");
  Program a = Program::reneg(BaseProgram::constant("Slot1"), r3);
  Program b = Program::reneg(BaseProgram::constant("Slot2"), r1);
  EvalTrace t;
  Outcome o = evaluate(std::vector<Program>{a, b}, g, {}, &t);
  CHECK_FALSE(t.agreed);
  CHECK(o == joint(g, "Slot1", "Slot2"));

  // The disagreement branch plays defaults against defaults. A default that
  // reads the counterpart's default fingerprint sees the same thing either way;
  // one keyed on the full program would not.
  BaseProgram keyed = BaseProgram::match({MatchPattern::On::Program, a.fingerprint()}, "Slot1",
                                         BaseProgram::constant("Slot2"));
  Program b2 = Program::reneg(keyed, r1);
  CHECK(evaluate(std::vector<Program>{a, b2}, g, {}) == joint(g, "Slot1", "Slot2"));

  // Against a base program the default plays the full counterpart program.
  Program punisher = match(a, "Slot3", constant("Slot1"));
  EvalTrace tm;
  Outcome om = evaluate(std::vector<Program>{a, punisher}, g, {}, &tm);
  CHECK(tm.family == "mixed");
  CHECK(om == joint(g, "Slot1", "Slot3"));
  Program on_default = match(constant("Slot1"), "Slot1", constant("Slot3"), true);
  CHECK(evaluate(std::vector<Program>{a, on_default}, g, {}) == joint(g, "Slot1", "Slot1"));
  Program mirror = match(constant("Slot1"), "Slot1", constant("Slot3"));
  CHECK(evaluate(std::vector<Program>{a, mirror}, g, {}) == joint(g, "Slot1", "Slot3"));
}

TEST_CASE("csr and icsr evaluation") {
  Game g = testing::scheduling();
  SvrPtr p1 = wildcard("p1", Region::from_polygon(Polygon::segment(P(1, 1), P(3, 1))));
  SvrPtr p2 = wildcard("p2", Region::from_polygon(Polygon::segment(P(1, 1), P(1, 3))));
  std::vector<Program> prof{Program::csr(BaseProgram::constant("Slot1"), p1),
                            Program::csr(BaseProgram::constant("Slot2"), p2)};
  EvalTrace t;
  Outcome o = evaluate(prof, g, {}, &t);
  CHECK(t.family == "csr");
  REQUIRE(t.rounds.size() == 1);
  CHECK(t.rounds[0].agreement == Region::from_polygon(Polygon::point(P(1, 1))));
  CHECK(payoff(g, o) == PayoffVector{R(1), R(1)});

  // disjoint sets fall back to the defaults
  SvrPtr only31 = wildcard("a", Region::from_polygon(Polygon::point(P(3, 1))));
  SvrPtr only13 = wildcard("b", Region::from_polygon(Polygon::point(P(1, 3))));
  CHECK(run({Program::csr(BaseProgram::constant("Slot1"), only31),
             Program::csr(BaseProgram::constant("Slot2"), only13)},
            g) == PayoffVector{R(0), R(0)});

  // csr against a base program does not renegotiate
  CHECK(run({prof[0], constant("Slot1")}, g) == PayoffVector{R(3), R(1)});

  // icsr threads each round's outcome into the next
  auto step = [](const char* name, Rational cap) {
    return std::make_shared<SVRFunction>(
        name, std::vector<SvrRule>{{CounterpartPattern{}, std::nullopt,
                                    RegionSpec::box({{Bound::at_default()}, {Bound::at_default()}},
                                                    {{Bound::absolute(cap)}, {Bound::absolute(cap)}})}});
  };
  std::vector<SvrPtr> rounds{step("s1", 1), step("s2", R(3, 2)), step("s3", 2)};
  std::vector<Program> ip{Program::icsr(BaseProgram::constant("Slot1"), rounds),
                          Program::icsr(BaseProgram::constant("Slot2"), rounds)};
  EvalTrace ti;
  Outcome oi = evaluate(ip, g, {}, &ti);
  REQUIRE(ti.rounds.size() == 3);
  CHECK(ti.rounds[0].selected->payoff == PayoffVector{R(1), R(1)});
  CHECK(ti.rounds[1].selected->payoff == PayoffVector{R(3, 2), R(3, 2)});
  CHECK(payoff(g, oi) == PayoffVector{R(2), R(2)});

  // different K is a mixed profile
  std::vector<Program> uneven{Program::icsr(BaseProgram::constant("Slot1"), rounds),
                              Program::icsr(BaseProgram::constant("Slot2"), {rounds[0]})};
  EvalTrace tu;
  evaluate(uneven, g, {}, &tu);
  CHECK(tu.family == "mixed");

  CHECK_THROWS_AS(Program::icsr(BaseProgram::constant("Slot1"), {}), DomainError);
}

TEST_CASE("selection outside the agreement set is an invariant violation") {
  Game g = testing::scheduling();
  SvrPtr s = wildcard("s", Region::from_polygon(Polygon::point(P(1, 1))));
  std::vector<Program> prof{Program::csr(BaseProgram::constant("Slot1"), s),
                            Program::csr(BaseProgram::constant("Slot2"), s)};
  auto rogue = SelectionFunction::external(
      "rogue", [](const std::vector<PayoffVector>&) { return PayoffVector{R(0), R(0)}; });
  CHECK_THROWS_AS(evaluate(prof, g, rogue), InvariantViolation);
}

TEST_CASE("classify") {
  Game g = testing::scheduling();
  CHECK(classify(constant("Slot3")).kind == Program::Kind::Base);
  auto r = slot3_reneg(g);
  Membership m = classify(Program::reneg(BaseProgram::constant("Slot1"), r));
  CHECK(m.kind == Program::Kind::Reneg);
  CHECK(m.function_fingerprints == std::vector<std::string>{r->fingerprint()});
  CHECK(m.default_fingerprint == constant("Slot1").fingerprint());
  SvrPtr a = improving("a");
  Membership mi = classify(Program::icsr(BaseProgram::constant("Slot1"), {a, a, a}));
  CHECK(mi.kind == Program::Kind::Icsr);
  CHECK(mi.rounds == 3);
}

TEST_CASE("chain limit") {
  Game g = testing::scheduling();
  Program p = constant("Slot1");
  for (int k = 0; k < 17; ++k) p = match(constant("Slot2"), "Slot3", p);
  CHECK_THROWS_AS(evaluate(std::vector<Program>{p, constant("Slot1")}, g, {}), EvaluationLimit);
  EvalOptions wide;
  wide.max_chain = 32;
  CHECK_NOTHROW(evaluate(std::vector<Program>{p, constant("Slot1")}, g, {}, nullptr, wide));
}

TEST_CASE("icsr with one round matches csr") {
  Game g = testing::scheduling();
  std::vector<SvrPtr> fns{
      improving("imp"),
      wildcard("p1", Region::from_polygon(Polygon::segment(P(1, 1), P(3, 1)))),
      wildcard("p2", Region::from_polygon(Polygon::segment(P(1, 1), P(1, 3)))),
      wildcard("hi", Region::from_polygon(Polygon::hull({P(2, 2), P(3, 1), P(1, 3)}))),
      wildcard("none", Region{}),
  };
  std::vector<Program> defaults = testing::depth1_space(kSlots);
  defaults.resize(12);
  std::vector<SelectionFunction> sels{SelectionFunction{},
                                      SelectionFunction::weighted_sum({R(2), R(1)})};
  std::size_t checked = 0;
  for (const auto& d1 : defaults) {
    for (const auto& d2 : defaults) {
      for (const auto& f1 : fns) {
        for (const auto& f2 : fns) {
          for (const auto& d : sels) {
            Outcome c = evaluate(std::vector<Program>{Program::csr(d1.default_program(), f1),
                                                      Program::csr(d2.default_program(), f2)},
                                 g, d);
            Outcome i = evaluate(std::vector<Program>{Program::icsr(d1.default_program(), {f1}),
                                                      Program::icsr(d2.default_program(), {f2})},
                                 g, d);
            CHECK(c == i);
            ++checked;
          }
        }
      }
    }
  }
  CHECK(checked == 12 * 12 * 25 * 2);
}

TEST_CASE("singleton csr sets reproduce point-valued renegotiation") {
  Game g = testing::scheduling();
  // The functions disagree in payoff wherever they disagree at all, so an
  // empty singleton intersection is exactly a disagreement.
  std::vector<RenegPtr> rs{slot3_reneg(g), target_reneg(g, "to1", "Slot1"),
                           target_reneg(g, "to2", "Slot2")};
  std::vector<SvrPtr> svrs;
  for (const auto& r : rs) svrs.push_back(singleton_svr(*r, g));
  std::vector<Program> space = testing::depth1_space(kSlots);
  std::size_t checked = 0;
  for (const auto& a : space) {
    for (const auto& b : space) {
      for (std::size_t i = 0; i < rs.size(); ++i) {
        for (std::size_t j = 0; j < rs.size(); ++j) {
          PayoffVector one = run({Program::reneg(a.default_program(), rs[i]),
                                  Program::reneg(b.default_program(), rs[j])},
                                 g);
          PayoffVector two = run({Program::csr(a.default_program(), svrs[i]),
                                  Program::csr(b.default_program(), svrs[j])},
                                 g);
          CHECK(one == two);
          ++checked;
        }
      }
    }
  }
  CHECK(checked == 30 * 30 * 9);
}

TEST_CASE("random profiles halt") {
  auto stats = testing::fuzz_halting(31, 10000);
  CHECK(stats.profiles == 10000);
  CHECK(stats.limits == 0);
  CHECK(stats.renegotiated > 0);
  CHECK(stats.max_depth == 6);
  CHECK(stats.max_rounds == 4);
}

TEST_CASE("program json round trip") {
  Game g = testing::scheduling();
  FunctionTable table;
  table.reneg["r"] = slot3_reneg(g);
  table.svr["rn"] = improving("rn");
  Json j = Json::parse(R"({"kind":"csr","default":{"kind":"match","pattern":{"kind":"const","action":"Slot1"},
    "then":"Slot1","else":{"kind":"const","action":"Slot2"}},"rn":"rn"})");
  Program p = parse_program(j, g, table);
  CHECK(p.kind() == Program::Kind::Csr);
  CHECK(p.default_program().play(constant("Slot1").fingerprint(), "") == "Slot1");
  CHECK(p.default_program().play(constant("Slot3").fingerprint(), "") == "Slot2");
  CHECK_THROWS_AS(parse_program(Json::parse(R"({"kind":"const","action":"Slot9"})"), g, table),
                  DomainError);
  CHECK_THROWS_AS(parse_program(Json::parse(R"({"kind":"reneg","default":{"kind":"const","action":"Slot1"},"r":"missing"})"), g, table),
                  ParseError);
}
