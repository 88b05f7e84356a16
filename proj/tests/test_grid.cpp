#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stabflow/grid.hpp"
#include "stabflow/problems.hpp"
#include "support.hpp"

using namespace stabflow;
namespace ts = testsupport;

TEST_SUITE("grid") {

TEST_CASE("grid spec geometry") {
  const GridSpec g(8, 0.01);
  CHECK(g.dx * g.N == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.u_count() == 7 * 8);
  CHECK(g.v_count() == 8 * 7);
  CHECK(g.state_size() == 112);
  CHECK(GridSpec::from_reynolds(16, 100.0).nu == doctest::Approx(0.01));
  CHECK_THROWS(GridSpec(3, 1.0));
  CHECK_THROWS(GridSpec(8, 0.0));
}

TEST_CASE("velocity field shapes and layout") {
  VelocityField f(5);
  CHECK(f.size() == 2 * 5 * 4);
  f.u(4, 5) = 1.0;
  f.v(1, 1) = 2.0;
  CHECK(f.data[f.v_offset() - 1] == 1.0);
  CHECK(f.data[f.v_offset()] == 2.0);
  CHECK_THROWS(VelocityField(5, State(7, 0.0)));
}

TEST_CASE("sample_velocity of zero and linear fields") {
  const GridSpec g(8, 1.0);
  const auto z = sample_velocity(g, [](double, double, double) { return Vec2{}; }, 0.0);
  CHECK(inf_norm(z) == 0.0);
  const auto lin = sample_velocity(g, [](double, double x, double y) { return Vec2{x, -y}; }, 0.0);
  for (int j = 1; j <= g.N; ++j)
    for (int i = 1; i < g.N; ++i) CHECK(lin.u(i, j) == doctest::Approx(i * g.dx).epsilon(1e-15));
  for (int j = 1; j < g.N; ++j)
    for (int i = 1; i <= g.N; ++i) CHECK(lin.v(i, j) == doctest::Approx(-j * g.dx).epsilon(1e-15));
}

TEST_CASE("sample_velocity of the Green-Taylor vortex") {
  const GridSpec g(8, 0.01);
  const auto prob = green_taylor(100.0);
  const auto f = sample_velocity(g, prob.exact->velocity, 0.0);
  for (int j = 1; j <= g.N; ++j)
    for (int i = 1; i < g.N; ++i)
      CHECK(f.u(i, j) == doctest::Approx(-std::sin(M_PI * i * g.dx) * std::cos(M_PI * (j - 0.5) * g.dx)));
}

TEST_CASE("inf_norm") {
  CellField z(4);
  CHECK(inf_norm(z) == 0.0);
  z(2, 3) = 3.0;
  CHECK(inf_norm(z) == 3.0);
  z(2, 3) = -3.0;
  CHECK(inf_norm(z) == 3.0);

  const GridSpec g(16, 1.0);
  const auto f = sample_velocity(g, [](double, double x, double y) {
    return Vec2{std::abs(std::sin(7.0 * x + 3.0 * y)), -std::abs(std::sin(5.0 * x * y))};
  }, 0.0);
  double scan = 0.0;
  for (double x : f.data) scan = std::max(scan, std::abs(x));
  CHECK(inf_norm(f) == scan);
}

TEST_CASE("weighted_rms_norm") {
  const State y(10, 0.0);
  CHECK(weighted_rms_norm(State(10, 0.0), y, 1e-3, 1e-3) == 0.0);
  CHECK(weighted_rms_norm(State(10, 1e-3), y, 1e-3, 7.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_WITH(weighted_rms_norm(State{}, State{}, 1.0, 1.0), "empty state");

  for (int trial = 0; trial < 20; ++trial) {
    const auto e = ts::random_vector(50);
    const auto yy = ts::random_vector(50);
    const double atol = ts::uniform(1e-6, 1e-2), rtol = ts::uniform(1e-6, 1e-2);
    long double acc = 0.0L;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const long double w = e[k] / (atol + rtol * std::fabs(yy[k]));
      acc += w * w;
    }
    const double expect = static_cast<double>(std::sqrt(acc / e.size()));
    CHECK(std::abs(weighted_rms_norm(e, yy, atol, rtol) - expect) <= 1e-14 * expect);
  }
}

TEST_CASE("mean removal") {
  auto f = ts::random_cell(8);
  remove_mean(f);
  CHECK(std::abs(mean(f)) <= 1e-15);
}

TEST_CASE("index round trip") {
  for (int n : {4, 8, 32, 128}) {
    const GridSpec g(n, 1.0);
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i < n; ++i) {
        const double x = g.face_x(i), y = g.center(j);
        const auto idx = u_index_of(g, x, y);
        REQUIRE(idx.i == i);
        REQUIRE(idx.j == j);
        CHECK(std::abs(g.face_x(idx.i) - x) <= 1e-15);
        CHECK(std::abs(g.center(idx.j) - y) <= 1e-15);
      }
    for (int j = 1; j < n; ++j)
      for (int i = 1; i <= n; ++i) {
        const auto idx = v_index_of(g, g.center(i), g.face_x(j));
        REQUIRE(idx.i == i);
        REQUIRE(idx.j == j);
      }
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i <= n; ++i) {
        const auto idx = cell_index_of(g, g.center(i), g.center(j));
        REQUIRE(idx.i == i);
        REQUIRE(idx.j == j);
      }
  }
}

TEST_CASE("boundary compatibility of the shipped problems") {
  const GridSpec g(32, 0.01);
  for (const char* name : {"forced", "taylor", "cavity"}) {
    const auto prob = make_problem(name, 100.0);
    for (int k = 0; k < 20; ++k) {
      const double t = ts::uniform(0.0, 1.0);
      CHECK(std::abs(boundary_flux(prob.boundary, g, t)) <= 1e-12);
    }
  }
}

TEST_CASE("field dump format") {
  std::ostringstream os;
  write_field(os, "p", 4, 0.5, {1.0 / 3.0, -2.0});
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "# field=p N=4 t=0.5");
  double a = 0.0, b = 0.0;
  in >> a >> b;
  CHECK(a == 1.0 / 3.0);
  CHECK(b == -2.0);

  const auto dir = std::filesystem::temp_directory_path() / "stabflow_grid_dump";
  VelocityField vel(4);
  vel.u(2, 3) = 0.25;
  vel.v(3, 2) = -0.75;
  write_velocity(dir.string(), vel, 1.0);
  std::ifstream uin(dir / "u.txt");
  std::getline(uin, header);
  CHECK(header == "# field=u N=4 t=1");
  std::vector<double> vals;
  double x;
  while (uin >> x) vals.push_back(x);
  CHECK(vals.size() == 12);
  CHECK(vals[(3 - 1) * 3 + (2 - 1)] == 0.25);
  std::filesystem::remove_all(dir);
}

}
