#include <doctest.h>

#include <memory>
#include <set>

#include "pgspi/renegotiation.hpp"
#include "support.hpp"

using namespace pgspi;
using namespace pgspi::geom;
using testing::constant;
using testing::P;
using testing::R;

namespace {

const std::vector<std::string> kSlots{"Slot1", "Slot2", "Slot3"};

Outcome joint(const Game& g, const std::string& a, const std::string& b) {
  return Outcome::pure(g.joint_index({a, b}));
}

Region poly(std::vector<Point> pts) { return Region::from_polygon(Polygon::hull(std::move(pts))); }
Region pt(Point p) { return Region::from_polygon(Polygon::point(p)); }

RenegPtr slot3_reneg(const Game& g) {
  std::vector<std::pair<Outcome, Outcome>> rules;
  for (const auto& a : kSlots) {
    for (const auto& b : kSlots) {
      if (a != b) rules.emplace_back(joint(g, a, b), joint(g, "Slot3", "Slot3"));
    }
  }
  return std::make_shared<RenegFunction>("to_slot3", rules);
}

SvrPtr wildcard(const std::string& name, Region r) {
  return std::make_shared<SVRFunction>(
      name, std::vector<SvrRule>{{CounterpartPattern{}, std::nullopt, RegionSpec::fixed(r)}});
}

SvrPtr boxed(const std::string& name, std::vector<std::vector<Bound>> lower,
             std::vector<std::vector<Bound>> upper) {
  return std::make_shared<SVRFunction>(
      name, std::vector<SvrRule>{{CounterpartPattern{}, std::nullopt,
                                  RegionSpec::box(std::move(lower), std::move(upper))}});
}

SvrPtr improving(const std::string& name) {
  return boxed(name, {{Bound::at_default()}, {Bound::at_default()}}, {{}, {}});
}

// The PMP of player i as a rule table.
SvrPtr pmp_only(const std::string& name, std::size_t i) {
  std::vector<std::vector<Bound>> upper{{}, {}};
  upper[1 - i] = {Bound::pmp()};
  return boxed(name, {{Bound::pmp()}, {Bound::pmp()}}, upper);
}

std::vector<Program> consts() { return {constant("Slot1"), constant("Slot2"), constant("Slot3")}; }

}  // namespace

TEST_CASE("validate_reneg") {
  Game g = testing::scheduling();
  auto good = validate_reneg(*slot3_reneg(g), g);
  CHECK(good.valid);
  CHECK(good.strict_witness.has_value());

  RenegFunction identity("identity", {{joint(g, "Slot1", "Slot1"), joint(g, "Slot1", "Slot1")}});
  auto id = validate_reneg(identity, g);
  CHECK_FALSE(id.valid);
  CHECK_FALSE(id.strict_witness.has_value());

  // (1,1) -> (3,1) is a weak improvement with a strict coordinate
  RenegFunction up("up", {{joint(g, "Slot3", "Slot3"), joint(g, "Slot1", "Slot1")}});
  CHECK(validate_reneg(up, g).valid);
  RenegFunction down("down", {{joint(g, "Slot1", "Slot1"), joint(g, "Slot3", "Slot3")}});
  auto bad = validate_reneg(down, g);
  CHECK_FALSE(bad.valid);
  REQUIRE_FALSE(bad.violations.empty());
  CHECK(bad.violations[0].find("player 1 drops from 3 to 1") != std::string::npos);
}

TEST_CASE("validate_svr") {
  Game g = testing::scheduling();
  // player 1's set: everything Pareto-worse than (3,1), from default (0,0)
  SvrPtr two_cells = std::make_shared<SVRFunction>(
      "two_cells", std::vector<SvrRule>{{CounterpartPattern{}, joint(g, "Slot1", "Slot2"),
                                    RegionSpec::fixed(poly({P(0, 0), P(3, 1), P(1, 1)}))}});
  auto ok = validate_svr(*two_cells, g, {});
  CHECK(ok.valid);
  CHECK(ok.universe.find("counterpart") != std::string::npos);

  SvrPtr worse = std::make_shared<SVRFunction>(
      "worse", std::vector<SvrRule>{{CounterpartPattern{}, joint(g, "Slot3", "Slot3"),
                                     RegionSpec::fixed(poly({P(0, 0), P(2, 2)}))}});
  auto w = validate_svr(*worse, g, {});
  CHECK_FALSE(w.valid);
  CHECK(w.violations[0].find("(0, 0)") != std::string::npos);

  CHECK_FALSE(validate_svr(*wildcard("empty", Region{}), g, {}).valid);
  CHECK(validate_svr(*improving("imp"), g, {improving("other")}).valid);

  // a conditional rule checked against each named counterpart
  SvrPtr other = improving("other");
  SvrPtr cond = std::make_shared<SVRFunction>(
      "cond", std::vector<SvrRule>{
                  {CounterpartPattern{CounterpartPattern::Kind::Exact, {pmp_only("q", 1)->fingerprint()}},
                   std::nullopt, RegionSpec::fixed(pt(P(0, 0)))},
                  {CounterpartPattern{}, std::nullopt,
                   RegionSpec::box({{Bound::at_default()}, {Bound::at_default()}}, {{}, {}})}});
  CHECK(validate_svr(*cond, g, {other}).valid);
  CHECK_FALSE(validate_svr(*cond, g, {other, pmp_only("q", 1)}).valid);
}

TEST_CASE("weighted-sum selection") {
  Game g = testing::scheduling();
  SelectionFunction even;
  CHECK(even.select(pt(P(1, 1)), g).payoff == PayoffVector{R(1), R(1)});
  Region seg = Region::from_polygon(Polygon::segment(P(3, 1), P(1, 3)));
  CHECK(even.select(seg, g).payoff == PayoffVector{R(1), R(3)});
  CHECK(SelectionFunction::weighted_sum({R(2), R(1)}).select(seg, g).payoff ==
        PayoffVector{R(3), R(1)});
  CHECK_THROWS_AS(even.select(Region{}, g), DomainError);
  CHECK_THROWS_AS(SelectionFunction::weighted_sum({R(1), R(0)}), DomainError);
  Selection s = even.select(seg, g);
  CHECK(payoff(g, s.outcome) == s.payoff);
}

TEST_CASE("selection lands on the frontier of its input") {
  Game g = testing::scheduling();
  std::vector<SelectionFunction> sels{SelectionFunction{},
                                      SelectionFunction::weighted_sum({R(2), R(1)}),
                                      SelectionFunction::weighted_sum({R(1), R(5)})};
  for (const auto& [s, _] : transitivity_samples(SelectionFunction{}, g, 300, 41)) {
    for (const auto& d : sels) {
      Selection x = d.select(s, g);
      CHECK(contains(s, x.payoff));
      CHECK(contains(frontier(s), x.payoff));
      CHECK_FALSE(dominated_in(s, x.payoff));
    }
  }
}

TEST_CASE("transitivity") {
  Game g = testing::scheduling();
  SelectionFunction d;
  auto samples = transitivity_samples(d, g, 10000, 7);
  auto rep = check_transitive(d, samples, g);
  CHECK(rep.passed());
  CHECK(rep.checked >= 9000);

  Game wide = testing::game_2p({{{2, 2}, {3, 3}}});
  auto small = check_transitive(d, {{pt(P(2, 2)), pt(P(3, 3))}}, wide);
  CHECK(small.passed());
  CHECK(small.checked == 1);
  CHECK(d.select(unite(pt(P(2, 2)), pt(P(3, 3))), wide).payoff == PayoffVector{R(3), R(3)});

  // Negative control: maximize player 1, break ties toward the lowest player 2.
  auto broken = SelectionFunction::external("p1_then_low_p2", [](const std::vector<PayoffVector>& vs) {
    PayoffVector best = vs.front();
    for (const auto& v : vs) {
      if (v[0] > best[0] || (v[0] == best[0] && v[1] < best[1])) best = v;
    }
    return best;
  });
  CHECK(broken.approximate());
  Region s = Region::from_polygon(Polygon::segment(P(1, 1), P(1, 3)));
  auto neg = check_transitive(broken, {{s, pt({R(1), R(2)})}}, g);
  CHECK_FALSE(neg.passed());
  CHECK(neg.counterexamples[0].find("dominated") != std::string::npos);
}

TEST_CASE("renegotiation transform") {
  Game g = testing::scheduling();
  ProgramTransform f = make_reneg_spi(slot3_reneg(g), g);
  auto run = [&](const std::vector<Program>& p) { return payoff(g, evaluate(p, g, {})); };
  CHECK(run({f.apply(0, constant("Slot1")), f.apply(1, constant("Slot2"))}) ==
        PayoffVector{R(1), R(1)});
  CHECK(run({f.apply(0, constant("Slot3")), f.apply(1, constant("Slot3"))}) ==
        PayoffVector{R(1), R(1)});

  RenegFunction identity("identity", {{joint(g, "Slot1", "Slot1"), joint(g, "Slot1", "Slot1")}});
  CHECK_THROWS_AS(make_reneg_spi(std::make_shared<RenegFunction>(identity), g), DomainError);

  std::vector<Program> space = testing::depth1_space(kSlots);
  bool strict = false;
  for (const auto& a : space) {
    for (const auto& b : space) {
      PayoffVector before = run({a, b});
      PayoffVector after = run({f.apply(0, a), f.apply(1, b)});
      CHECK(dominates(after, before));
      strict = strict || pareto_improves(after, before);
    }
  }
  CHECK(strict);
}

TEST_CASE("csr transform") {
  Game g = testing::scheduling();
  std::vector<std::vector<Program>> space(2, testing::depth1_space(kSlots));
  std::vector<SvrPtr> covering{improving("a"), improving("b")};
  ProgramTransform f = make_csr_spi(covering, g, space);
  auto run = [&](const std::vector<Program>& p) { return payoff(g, evaluate(p, g, {})); };
  PayoffVector u = run({f.apply(0, constant("Slot1")), f.apply(1, constant("Slot2"))});
  CHECK(dominates(u, {R(1), R(1)}));
  CHECK(run({f.apply(0, constant("Slot1")), f.apply(1, constant("Slot1"))}) ==
        PayoffVector{R(3), R(1)});

  // PMP-only tables meet exactly at max(g, u(a))
  ProgramTransform y = make_csr_spi({pmp_only("y1", 0), pmp_only("y2", 1)}, g, space);
  CHECK(run({y.apply(0, constant("Slot1")), y.apply(1, constant("Slot2"))}) ==
        PayoffVector{R(1), R(1)});

  // tables that miss the PMP are rejected with the failing player and outcome
  try {
    make_csr_spi({wildcard("a", pt(P(3, 1))), wildcard("b", pt(P(1, 3)))}, g, space);
    FAIL("expected a precondition failure");
  } catch (const DomainError& e) {
    std::string what = e.what();
    // first failure in profile order: at (Slot1, Slot1) player 2's PMP is (3,1)
    CHECK(what.find("player 2 at default (Slot1, Slot1)") != std::string::npos);
  }
}

TEST_CASE("pmp extension") {
  Game g = testing::scheduling();
  SelectionFunction d;

  SUBCASE("figure 4 configuration") {
    Region r1 = unite(poly({P(0, 0), {R(1, 2), R(3, 2)}, {R(1, 2), R(3, 4)}}),
                      poly({P(0, 0), {R(1, 2), R(3, 4)}, {R(9, 4), R(3, 4)}}));
    Region r2 = poly({P(0, 0), P(1, 3), {R(1), R(3, 8)}});
    Program p1 = Program::csr(BaseProgram::constant("Slot1"), wildcard("pmp_extension_1", r1));
    Program p2 = Program::csr(BaseProgram::constant("Slot2"), wildcard("pmp_extension_2", r2));
    CHECK(payoff(g, evaluate(std::vector<Program>{p1, p2}, g, d)) ==
          PayoffVector{R(1, 2), R(3, 2)});
    Program e1 = pmp_extend(p1, 0, g, {{p2}}, d);
    CHECK(e1.fingerprint() != p1.fingerprint());
    Region ext = e1.svr()->evaluate({p2.svr().get()}, joint(g, "Slot1", "Slot2"), g);
    Region y = Region::from_polygon(Polygon::segment({R(1), R(3, 2)}, {R(5, 2), R(3, 2)}));
    CHECK(covers(ext, y));
    CHECK(covers(ext, r1));
    CHECK(same_set(ext, unite(r1, y)));
    CHECK(payoff(g, evaluate(std::vector<Program>{e1, p2}, g, d)) ==
          PayoffVector{R(1), R(3, 2)});
    // other counterparts see the original rules
    Program stranger = Program::csr(BaseProgram::constant("Slot2"), wildcard("s", pt(P(1, 3))));
    CHECK(same_set(e1.svr()->evaluate({stranger.svr().get()}, joint(g, "Slot1", "Slot2"), g), r1));
  }

  SUBCASE("already covering is a fixed point") {
    Program p1 = Program::csr(BaseProgram::constant("Slot1"), improving("a"));
    Program p2 = Program::csr(BaseProgram::constant("Slot2"), improving("b"));
    CHECK(pmp_extend(p1, 0, g, {{p2}}, d).fingerprint() == p1.fingerprint());
  }

  SUBCASE("no-overlap pair meets at the pmm") {
    Program p1 = Program::csr(BaseProgram::constant("Slot1"), wildcard("self1", pt(P(3, 1))));
    Program p2 = Program::csr(BaseProgram::constant("Slot2"), wildcard("self2", pt(P(1, 3))));
    CHECK(payoff(g, evaluate(std::vector<Program>{p1, p2}, g, d)) == PayoffVector{R(0), R(0)});
    Program e1 = pmp_extend(p1, 0, g, {{p2}}, d);
    Program e2 = pmp_extend(p2, 1, g, {{p1}}, d);
    EvalTrace t;
    Outcome o = evaluate(std::vector<Program>{e1, e2}, g, d, &t);
    CHECK(contains(t.rounds[0].agreement, PayoffVector{R(1), R(1)}));
    CHECK(payoff(g, o) == PayoffVector{R(1), R(1)});
  }

  SUBCASE("base programs are rejected") {
    CHECK_THROWS_AS(pmp_extend(constant("Slot1"), 0, g, {}, d), DomainError);
  }

  SUBCASE("extension never removes points") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 40; ++it) {
      Region r1 = Region::from_polygon(Polygon::hull({testing::random_point(rng, 3, 4)}));
      Region r2 = Region::from_polygon(Polygon::hull(
          {testing::random_point(rng, 3, 4), testing::random_point(rng, 3, 4), testing::random_point(rng, 3, 4)}));
      r1 = intersect(r1, g.feasible());
      r2 = intersect(r2, g.feasible());
      Program p1 = Program::csr(BaseProgram::constant(kSlots[it % 3]), wildcard("x", r1));
      Program p2 = Program::csr(BaseProgram::constant(kSlots[(it / 3) % 3]), wildcard("y", r2));
      Program e1 = pmp_extend(p1, 0, g, {{p2}}, d);
      Outcome a = default_outcome(std::vector<Program>{p1, p2}, g);
      Region before = p1.svr()->evaluate({p2.svr().get()}, a, g);
      Region after = e1.svr()->evaluate({p2.svr().get()}, a, g);
      CHECK(covers(after, before));
      Outcome ap = evaluate(std::vector<Program>{p1, p2}, g, d);
      CHECK(covers(after, pmp(g, 0, ap)));
    }
  }
}

TEST_CASE("selection translation") {
  Game g = testing::scheduling();
  std::vector<SelectionFunction> sels{SelectionFunction{},
                                      SelectionFunction::weighted_sum({R(2), R(1)}),
                                      SelectionFunction::weighted_sum({R(1), R(3)})};
  std::vector<std::vector<SvrPtr>> profiles{
      {improving("a"), improving("b")},
      {improving("a"), boxed("floor", {{Bound::pmp()}, {Bound::pmp()}}, {{}, {}})},
      {boxed("lifted", {{Bound::at_default(), Bound::absolute(1)}, {Bound::at_default(), Bound::absolute(1)}},
             {{}, {}}),
       improving("b")},
      {pmp_only("y1", 0), pmp_only("y2", 1)},
  };
  std::vector<Outcome> defaults;
  for (std::size_t j = 0; j < g.joint_count(); ++j) defaults.push_back(Outcome::pure(j));

  std::size_t cells = 0;
  for (const auto& d_old : sels) {
    for (const auto& prof : profiles) {
      auto translated = translate_selection(prof, d_old, g, defaults);
      bool same = true;
      for (const auto& a : consts()) {
        for (const auto& b : consts()) {
          Outcome before = evaluate(std::vector<Program>{Program::csr(a.default_program(), prof[0]),
                                                         Program::csr(b.default_program(), prof[1])},
                                    g, d_old);
          for (const auto& d_new : sels) {
            Outcome after = evaluate(
                std::vector<Program>{Program::csr(a.default_program(), translated[0]),
                                     Program::csr(b.default_program(), translated[1])},
                g, d_new);
            same = same && after == before;
          }
        }
      }
      CHECK(same);
      ++cells;
    }
  }
  CHECK(cells == 12);

  // a singleton profile translates to the same regions
  std::vector<SvrPtr> single{wildcard("a", pt(P(1, 1))), wildcard("b", pt(P(1, 1)))};
  auto t = translate_selection(single, SelectionFunction{}, g, defaults);
  for (const auto& a : defaults) {
    CHECK(t[0]->evaluate({t[1].get()}, a, g) == single[0]->evaluate({single[1].get()}, a, g));
  }

  std::vector<SvrPtr> apart{wildcard("a", pt(P(3, 1))), wildcard("b", pt(P(1, 3)))};
  CHECK_THROWS_AS(translate_selection(apart, SelectionFunction{}, g, defaults), DomainError);
}
