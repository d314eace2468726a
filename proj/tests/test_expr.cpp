#include <doctest.h>

#include <cmath>
#include <set>

#include "nhdyn/expr.hpp"
#include "test_support.hpp"

using namespace nhdyn;
using nhdyn::testing::RandomExprGen;
using nhdyn::testing::fdDerivative;
using nhdyn::testing::randomBindings;
using nhdyn::testing::tameAt;

namespace {

std::shared_ptr<const SymbolTable> diskTable() {
  return std::make_shared<const SymbolTable>(
      std::vector<std::string>{"x", "y", "theta", "phi"},
      std::vector<std::string>{"M", "R", "I1", "I2"});
}

struct LeafCount {
  int velocities = 0;
  int coordinates = 0;
  int parameters = 0;
  int constants = 0;
};

void countLeaves(const Expression::NodePtr& n, LeafCount& c) {
  using Kind = Expression::Node::Kind;
  switch (n->kind) {
    case Kind::Constant:
      ++c.constants;
      return;
    case Kind::Variable:
      if (n->varKind == VarKind::Velocity) ++c.velocities;
      if (n->varKind == VarKind::Coordinate) ++c.coordinates;
      if (n->varKind == VarKind::Parameter) ++c.parameters;
      return;
    case Kind::Unary:
      countLeaves(n->a, c);
      return;
    case Kind::Binary:
      countLeaves(n->a, c);
      countLeaves(n->b, c);
      return;
  }
}

}  // namespace

TEST_CASE("parse builds the expected leaf population") {
  auto table = diskTable();
  auto e = Expression::parse("0.5*M*(dx^2+dy^2)", table);
  LeafCount c;
  countLeaves(e.root(), c);
  CHECK(c.velocities == 2);
  CHECK(c.parameters == 1);
  CHECK(c.coordinates == 0);
}

TEST_CASE("parse resolves rolling-constraint variables") {
  auto table = diskTable();
  auto e = Expression::parse("dx - R*cos(theta)*dphi", table);
  auto names = e.variableNames();
  CHECK(names == std::vector<std::string>{"R", "dphi", "dx", "theta"});
}

TEST_CASE("parse is whitespace insensitive") {
  auto table = diskTable();
  auto a = Expression::parse("dx - R*cos(theta)*dphi", table);
  auto b = Expression::parse("  dx-R * cos( theta ) *dphi ", table);
  CHECK(a.structurallyEqual(b));
}

TEST_CASE("operator precedence and associativity") {
  auto table = diskTable();
  auto b = Bindings::fromMap(table, {{"x", 0}, {"y", 0}, {"theta", 0}, {"phi", 0},
                                     {"dx", 0}, {"dy", 0}, {"dtheta", 0}, {"dphi", 0},
                                     {"M", 0}, {"R", 0}, {"I1", 0}, {"I2", 0}});
  CHECK(Expression::parse("2^3*4+1", table).eval(b) == 33.0);
  CHECK(Expression::parse("2*3^2", table).eval(b) == 18.0);
  CHECK(Expression::parse("-2^2", table).eval(b) == -4.0);
  CHECK(Expression::parse("2^-1", table).eval(b) == 0.5);
  CHECK(Expression::parse("2^3^2", table).eval(b) == 512.0);  // right associative
  CHECK(Expression::parse("8/4/2", table).eval(b) == 1.0);    // left associative
  CHECK(Expression::parse("8-4-2", table).eval(b) == 2.0);
}

TEST_CASE("parse rejects malformed input with positions") {
  auto table = diskTable();
  CHECK_THROWS_AS(Expression::parse("dx +", table), SyntaxError);
  try {
    Expression::parse("dx +", table);
  } catch (const SyntaxError& e) {
    CHECK(e.position >= 3);
  }
  CHECK_THROWS_AS(Expression::parse("", table), SyntaxError);
  CHECK_THROWS_AS(Expression::parse("(dx + dy", table), SyntaxError);
  CHECK_THROWS_AS(Expression::parse("dx + dy)", table), SyntaxError);
  CHECK_THROWS_AS(Expression::parse("foo(dx)", table), SyntaxError);   // unknown function
  CHECK_THROWS_AS(Expression::parse("dx * unknown", table), SyntaxError);
  CHECK_THROWS_AS(Expression::parse("* dx", table), SyntaxError);
}

TEST_CASE("eval on the rolling constraint at an on-constraint state") {
  auto table = diskTable();
  auto e = Expression::parse("dx - R*cos(theta)*dphi", table);
  auto b = Bindings::fromMap(table, {{"x", 0}, {"y", 0}, {"theta", 0}, {"phi", 0},
                                     {"dx", 2}, {"dy", 0}, {"dtheta", 1}, {"dphi", 2},
                                     {"M", 1}, {"R", 1}, {"I1", 1}, {"I2", 1}});
  CHECK(e.eval(b) == 0.0);
}

TEST_CASE("eval quadratic and domain errors") {
  auto table = std::make_shared<const SymbolTable>(std::vector<std::string>{"q1"},
                                                   std::vector<std::string>{});
  auto b = Bindings::fromMap(table, {{"q1", 3.0}, {"dq1", 0.0}});
  CHECK(Expression::parse("q1^2/2", table).eval(b) == 4.5);

  auto bneg = Bindings::fromMap(table, {{"q1", -1.0}, {"dq1", 0.0}});
  CHECK_THROWS_AS(Expression::parse("log(q1)", table).eval(bneg), DomainError);
  CHECK_THROWS_AS(Expression::parse("sqrt(q1)", table).eval(bneg), DomainError);
}

TEST_CASE("bindings must be complete") {
  auto table = diskTable();
  CHECK_THROWS_AS(Bindings::fromMap(table, {{"x", 1.0}}), UnboundVariable);
}

TEST_CASE("eval is deterministic") {
  auto table = diskTable();
  auto e = Expression::parse("sin(theta)*dphi + exp(x*0.25) - M/(1+dy^2)", table);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    auto b = randomBindings(table, rng);
    double first = e.eval(b);
    double second = e.eval(b);
    CHECK(std::memcmp(&first, &second, sizeof(double)) == 0);
  }
}

TEST_CASE("diff matches hand derivatives under evaluation") {
  auto table = diskTable();
  std::mt19937_64 rng(11);

  auto d1 = Expression::parse("dx^2/2", table).diff("dx");
  auto d2 = Expression::parse("R*cos(theta)*dphi", table).diff("theta");
  auto expected2 = Expression::parse("-R*sin(theta)*dphi", table);
  for (int i = 0; i < 10; ++i) {
    auto b = randomBindings(table, rng);
    CHECK(d1.eval(b) == doctest::Approx(b[table->requireSlot("dx")]).epsilon(1e-12));
    CHECK(d2.eval(b) == doctest::Approx(expected2.eval(b)).epsilon(1e-12));
  }

  auto pairTable = std::make_shared<const SymbolTable>(
      std::vector<std::string>{"x1", "y1", "x2", "y2"}, std::vector<std::string>{});
  auto d3 = Expression::parse("dx1*dy2 - dx2*dy1", pairTable).diff("dy2");
  for (int i = 0; i < 10; ++i) {
    auto b = randomBindings(pairTable, rng);
    CHECK(d3.eval(b) == doctest::Approx(b[pairTable->requireSlot("dx1")]).epsilon(1e-12));
  }
}

TEST_CASE("diff rejects parameters and unknown names") {
  auto table = diskTable();
  auto e = Expression::parse("M*dx", table);
  CHECK_THROWS_AS(e.diff("M"), UnknownVariable);
  CHECK_THROWS_AS(e.diff("nope"), UnknownVariable);
}

TEST_CASE("symbolic derivative matches central finite differences on 200 random trees") {
  auto table = diskTable();
  RandomExprGen gen(table, 2024);
  int tested = 0;
  while (tested < 200) {
    Expression e = gen.expression(6);
    std::uniform_int_distribution<int> pickVar(0, 2 * table->n() - 1);
    int slot = pickVar(gen.rng());
    std::string var = slot < table->n() ? table->coords()[slot]
                                        : table->velocityName(slot - table->n());
    Expression de = e.diff(var);

    bool checked = false;
    for (int attempt = 0; attempt < 40 && !checked; ++attempt) {
      Bindings b = randomBindings(table, gen.rng());
      if (!tameAt(e, b) || !tameAt(de, b)) continue;
      double ad = de.eval(b);
      double fd = fdDerivative(e, b, slot);
      if (!std::isfinite(fd)) continue;
      CHECK(std::abs(ad - fd) <= 1e-6 * (1.0 + std::abs(ad)));
      checked = true;
    }
    if (checked) ++tested;
  }
  CHECK(tested == 200);
}

TEST_CASE("second partials commute under evaluation") {
  auto table = diskTable();
  RandomExprGen gen(table, 515);
  int tested = 0;
  while (tested < 50) {
    Expression e = gen.expression(5);
    std::uniform_int_distribution<int> pickVel(0, table->n() - 1);
    std::string vi = table->velocityName(pickVel(gen.rng()));
    std::string vj = table->velocityName(pickVel(gen.rng()));
    Expression dij = e.diff(vi).diff(vj);
    Expression dji = e.diff(vj).diff(vi);
    for (int attempt = 0; attempt < 40; ++attempt) {
      Bindings b = randomBindings(table, gen.rng());
      if (!tameAt(dij, b) || !tameAt(dji, b)) continue;
      CHECK(dij.eval(b) == doctest::Approx(dji.eval(b)).epsilon(0).scale(1).epsilon(0)
                                .scale(0)  // exact tolerance handled below
      );
      CHECK(std::abs(dij.eval(b) - dji.eval(b)) <= 1e-9 * (1.0 + std::abs(dij.eval(b))));
      ++tested;
      break;
    }
  }
  CHECK(tested >= 50);
}

TEST_CASE("parse-print-parse is idempotent on the AST") {
  auto table = diskTable();
  RandomExprGen gen(table, 99);
  for (int i = 0; i < 200; ++i) {
    Expression e = gen.expression(6);
    Expression once = Expression::parse(e.str(), table);
    CHECK(once.structurallyEqual(e));
    Expression twice = Expression::parse(once.str(), table);
    CHECK(twice.structurallyEqual(once));
    CHECK(once.str() == twice.str());
  }

  for (const char* text : {"dx - R*cos(theta)*dphi", "0.5*M*(dx^2+dy^2)", "-x^2", "x^-2",
                           "2^3^2", "x - (y - theta)", "x/(y*theta)", "-(x + y)",
                           "1e-05*x + 2.5e+30"}) {
    Expression e = Expression::parse(text, table);
    CHECK(Expression::parse(e.str(), table).structurallyEqual(e));
  }
}

TEST_CASE("constant folding keeps derivative trees small but exact") {
  auto table = diskTable();
  auto e = Expression::parse("0.5*M*(dx^2+dy^2)", table);
  auto d = e.diff("dx").diff("dx");
  // ∂²/∂dx² is M-proportional with no velocity leaves left.
  LeafCount c;
  countLeaves(d.root(), c);
  CHECK(c.velocities == 0);
  std::mt19937_64 rng(3);
  auto b = randomBindings(table, rng);
  CHECK(d.eval(b) == doctest::Approx(b[table->requireSlot("M")]).epsilon(1e-14));
}
