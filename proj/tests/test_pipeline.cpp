#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <unistd.h>

#include "torsionlab/error.hpp"
#include "torsionlab/parallel.hpp"
#include "torsionlab/pipeline.hpp"
#include "torsionlab/serialize.hpp"

using namespace torsionlab;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

pipeline::ModelConfig toy() {
  pipeline::ModelConfig c;
  c.single_nu = 0.5;
  c.fit_order = "3/2";
  return c;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) { setenv("TORSIONLAB_THREADS", value, 1); }
  ~EnvGuard() { unsetenv("TORSIONLAB_THREADS"); }
};

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("number formatting") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(-2.0) == "-2");
    CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::format_double(std::nan("")) == "nan");
    io::Json j{{"a", 1.5}, {"b", -std::numeric_limits<double>::infinity()}, {"c", {1, 2}}, {"d", "x\"y"}};
    CHECK(io::dump(j, -1) == R"({"a":1.5,"b":"-inf","c":[1,2],"d":"x\"y"})");
    CHECK(io::Json::parse(io::dump(j, 2)) == io::Json::parse(io::dump(j, -1)));
  }

  TEST_CASE("atomic writes") {
    const auto dir = fs::temp_directory_path() / ("torsionlab_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    io::write_atomic(dir / "a.json", "{}\n");
    std::ifstream in(dir / "a.json");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "{}\n");
    std::size_t n = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
    CHECK(n == 1);
    CHECK(kind_of([&] { io::write_atomic(dir / "missing" / "a.json", "x"); }) == ErrorKind::Io);
    fs::remove_all(dir);
  }

  TEST_CASE("config validation") {
    using C = pipeline::ModelConfig;
    auto bad = [](auto edit) {
      C c;
      edit(c);
      return kind_of([&] { c.validate(); });
    };
    C{}.validate();
    CHECK(bad([](C& c) { c.model = "sphere"; }) == ErrorKind::UnknownModel);
    CHECK(bad([](C& c) { c.fiber = "klein"; }) == ErrorKind::UnknownModel);
    CHECK(bad([](C& c) { c.base = "circle"; }) == ErrorKind::InvalidArgument);
    CHECK(bad([](C& c) { c.t_min = 0.2; }) == ErrorKind::InvalidArgument);
    CHECK(bad([](C& c) { c.points = 1; }) == ErrorKind::InvalidArgument);
    CHECK(bad([](C& c) { c.fiber_radius = -1; }) == ErrorKind::InvalidArgument);
    CHECK(bad([](C& c) { c.fit_order = "0"; }) == ErrorKind::InvalidArgument);
    CHECK(bad([](C& c) { c.split = 1e-5; }) == ErrorKind::InvalidArgument);
    CHECK(bad([](C& c) {
            c.model = "product";
            c.base = "circle";
            c.single_nu = 1.0;
          }) == ErrorKind::InvalidArgument);

    C p;
    p.model = "product";
    p.base = "torus";
    p.fiber = "torus";
    p.validate();
    CHECK(p.dimension() == 5);
    CHECK(p.descriptor().dimension() == 5);
    CHECK(p.fiber_period_list().size() == 2);
  }

  TEST_CASE("single-mode run") {
    const auto r = pipeline::run(toy());
    REQUIRE(r.report.per_degree.size() == 1);
    CHECK(std::abs(r.report.per_degree[0].zeta_prime0 + std::log(2.0)) < 1e-5);
    const auto j = pipeline::torsion_json(r);
    CHECK(j["schema"] == io::kSchema);
    CHECK(j.contains("config"));
    CHECK(j.contains("report"));

    const auto t = pipeline::run(toy(), pipeline::Stage::Trace);
    CHECK(t.fits.empty());
    CHECK(t.samples.size() == 1);
  }

  TEST_CASE("output is byte-identical across runs and thread counts") {
    auto c = toy();
    c.single_nu.reset();
    c.lambda_max = 2e4;
    c.t_min = 2e-3;
    std::string first;
    for (const char* threads : {"1", "3", "1"}) {
      EnvGuard g(threads);
      CHECK(thread_count() == static_cast<unsigned>(std::atoi(threads)));
      const auto text = io::dump(pipeline::trace_json(pipeline::run(c, pipeline::Stage::Trace)));
      if (first.empty()) first = text;
      CHECK(text == first);
    }
  }
}
