#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cmc/dataset.hpp"
#include "cmc/mesh.hpp"
#include "cmc/weierstrass.hpp"

using namespace cmc;

namespace {

GridChart chart(double x0, double x1, double y0, double y1, std::size_t nx,
                std::size_t ny) {
  GridChart c;
  c.x_min = x0; c.x_max = x1; c.y_min = y0; c.y_max = y1;
  c.nx = nx; c.ny = ny;
  return c;
}

DatasetFile sample_dataset() {
  GridChart c = chart(0, 3, 0, 3, 17, 17);
  SpinorData s = make_cylinder(c, 1.0);
  DatasetFile ds = make_dataset(c);
  add_field(ds, "psi1", s.psi1);
  add_field(ds, "psi2", s.psi2);
  add_field(ds, "p", s.p);
  ds.provenance["generator"] = "cylinder";
  ds.provenance["parameters"] = {{"r", 1.0}};
  ds.provenance["conventions"] = {
      {"area_form", "dz^dzbar = -2i dx dy"},
      {"boundary_stencil", "matched-truncation one-sided"}};
  return ds;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("serialization round trip is byte identical") {
  DatasetFile ds = sample_dataset();
  std::string bytes = serialize_dataset(ds);
  DatasetFile back = parse_dataset(bytes);
  CHECK(serialize_dataset(back) == bytes);
  CHECK(back.chart.same_as(ds.chart));
  REQUIRE(back.fields.size() == 3);
  const ComplexField& p1 = need_complex(back, "psi1");
  for (std::size_t k = 0; k < p1.values.size(); ++k) {
    REQUIRE(p1.values[k] == ds.fields[0].c.values[k]);
    REQUIRE(p1.mask[k] == ds.fields[0].c.mask[k]);
  }
  CHECK(back.provenance == ds.provenance);
}

TEST_CASE("file round trip preserves every byte") {
  DatasetFile ds = sample_dataset();
  std::string path = temp_path("cmc_dataset_roundtrip.json");
  write_dataset(ds, path);
  CHECK(slurp(path) == serialize_dataset(ds));
  DatasetFile back = read_dataset(path);
  CHECK(serialize_dataset(back) == serialize_dataset(ds));
  std::filesystem::remove(path);
}

TEST_CASE("awkward doubles survive the decimal round trip exactly") {
  GridChart c = chart(0, 1, 0, 1, 2, 2);
  RealField f(c);
  f.values = {1.0 / 3.0, 3.14159265358979323846, 1e-300, -0.0};
  DatasetFile ds = make_dataset(c);
  add_field(ds, "H", f);
  DatasetFile back = parse_dataset(serialize_dataset(ds));
  const RealField& g = need_real(back, "H");
  for (std::size_t k = 0; k < 4; ++k) REQUIRE(g.values[k] == f.values[k]);
  CHECK(std::signbit(g.values[3]));
  CHECK(serialize_dataset(back) == serialize_dataset(ds));
}

TEST_CASE("field order is insertion order") {
  GridChart c = chart(0, 1, 0, 1, 3, 3);
  DatasetFile ds = make_dataset(c);
  add_field(ds, "psi2", ComplexField(c, Complex(1, 0)));
  add_field(ds, "psi1", ComplexField(c));
  DatasetFile back = parse_dataset(serialize_dataset(ds));
  REQUIRE(back.fields.size() == 2);
  CHECK(back.fields[0].role == "psi2");
  CHECK(back.fields[1].role == "psi1");
}

TEST_CASE("all three field kinds round trip") {
  GridChart c = chart(-1, 1, -1, 1, 5, 5);
  DatasetFile ds = make_dataset(c);
  Vec3Field n(c);
  for (std::size_t k = 0; k < n.x.size(); ++k) {
    n.x[k] = 0.1 * double(k);
    n.y[k] = -0.2;
    n.z[k] = 1.0;
  }
  n.mask[3] = 0;
  add_field(ds, "n", n);
  add_field(ds, "R", RealField(c, 1.0));
  add_field(ds, "Q", ComplexField(c, Complex(0, 2)));
  DatasetFile back = parse_dataset(serialize_dataset(ds));
  const Vec3Field& nb = need_vec3(back, "n");
  CHECK(nb.mask[3] == 0);
  CHECK(nb.x[7] == 0.1 * 7.0);
  CHECK(need_real(back, "R").values[0] == 1.0);
  CHECK(need_complex(back, "Q").values[24] == Complex(0, 2));
}

TEST_CASE("unknown format version is rejected") {
  nlohmann::json j = nlohmann::json::parse(serialize_dataset(sample_dataset()));
  j["format"] = "cmc-dataset/2";
  CHECK_THROWS_AS(parse_dataset(j.dump()), Error);
  try {
    parse_dataset(j.dump());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownVersion);
  }
}

TEST_CASE("missing structural keys are reported as such") {
  std::string bytes = serialize_dataset(sample_dataset());
  for (const char* key : {"format", "chart", "fields"}) {
    nlohmann::json j = nlohmann::json::parse(bytes);
    j.erase(key);
    try {
      parse_dataset(j.dump());
      FAIL("expected a throw after erasing ", key);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingField);
    }
  }
  nlohmann::json j = nlohmann::json::parse(bytes);
  j["fields"][0].erase("re");
  try {
    parse_dataset(j.dump());
    FAIL("expected a throw for a complex field without re");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingField);
  }
}

TEST_CASE("typed access demands the role be present") {
  DatasetFile ds = sample_dataset();
  CHECK(find_field(ds, "rho") == nullptr);
  CHECK_THROWS_AS(need_complex(ds, "rho"), Error);
  try {
    need_complex(ds, "rho");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingField);
  }
  CHECK_THROWS_AS(need_vec3(ds, "n"), Error);
}

TEST_CASE("array lengths must match the chart") {
  nlohmann::json j = nlohmann::json::parse(serialize_dataset(sample_dataset()));
  j["fields"][0]["re"].erase(0);
  try {
    parse_dataset(j.dump());
    FAIL("expected a dimension complaint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }

  DatasetFile ds = sample_dataset();
  ComplexField off(chart(0, 1, 0, 1, 3, 3));
  CHECK_THROWS_AS(add_field(ds, "rho", off), Error);
  try {
    add_field(ds, "rho", off);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("malformed content is rejected as BadParameter") {
  CHECK_THROWS_AS(parse_dataset("{nope"), Error);
  try {
    parse_dataset("{nope");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadParameter);
  }

  GridChart c = chart(0, 1, 0, 1, 3, 3);
  DatasetFile ds = make_dataset(c);
  CHECK_THROWS_AS(add_field(ds, "psi3", ComplexField(c)), Error);
  add_field(ds, "psi1", ComplexField(c));
  CHECK_THROWS_AS(add_field(ds, "psi1", ComplexField(c)), Error);

  nlohmann::json j = nlohmann::json::parse(serialize_dataset(ds));
  j["fields"][0]["mask"][0] = 2;
  try {
    parse_dataset(j.dump());
    FAIL("expected a mask complaint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadParameter);
  }

  RealField bad(c);
  bad.values[0] = std::nan("");
  DatasetFile ds2 = make_dataset(c);
  add_field(ds2, "H", bad);
  CHECK_THROWS_AS(serialize_dataset(ds2), Error);
}

TEST_CASE("obj text for one flat cell is the documented example") {
  GridChart c = chart(0, 1, 0, 1, 2, 2);
  Vec3Field r(c), n(c);
  for (std::size_t k = 0; k < 4; ++k) {
    r.x[k] = double(k % 2);
    r.y[k] = double(k / 2);
    r.z[k] = 0.0;
    n.z[k] = 1.0;
  }
  CHECK(obj_text(r, n) ==
        "v 0 0 0\n"
        "v 1 0 0\n"
        "v 0 1 0\n"
        "v 1 1 0\n"
        "vn 0 0 1\n"
        "vn 0 0 1\n"
        "vn 0 0 1\n"
        "vn 0 0 1\n"
        "f 1//1 2//2 4//4\n"
        "f 1//1 4//4 3//3\n");
}

TEST_CASE("faces touching a masked point are dropped") {
  GridChart c = chart(0, 1, 0, 1, 3, 3);
  Vec3Field r(c), n(c);
  for (std::size_t k = 0; k < 9; ++k) n.z[k] = 1.0;
  r.mask[c.index(1, 1)] = 0;
  std::string text = obj_text(r, n);
  std::size_t faces = 0, verts = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("f ", 0) == 0) ++faces;
    if (line.rfind("v ", 0) == 0) ++verts;
  }
  CHECK(verts == 8);
  CHECK(faces == 0);

  // one masked corner only removes its own cell
  Vec3Field r2(c);
  r2.mask[c.index(0, 0)] = 0;
  std::string text2 = obj_text(r2, n);
  faces = 0;
  std::istringstream lines2(text2);
  while (std::getline(lines2, line))
    if (line.rfind("f ", 0) == 0) ++faces;
  CHECK(faces == 6);
}

TEST_CASE("fully masked exports throw EmptyGeometry") {
  GridChart c = chart(0, 1, 0, 1, 3, 3);
  Vec3Field r(c), n(c);
  for (std::size_t k = 0; k < 9; ++k) r.mask[k] = 0;
  CHECK_THROWS_AS(obj_text(r, n), Error);
  try {
    obj_text(r, n);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyGeometry);
  }
}

TEST_CASE("write_obj writes obj_text bytes and counts them") {
  GridChart c = chart(0, 3, 0, 3, 17, 17);
  SpinorData s = make_cylinder(c, 1.0);
  SurfaceResult surf = integrate_surface(s, 8, 8);
  GeometryBundle g = derive_geometry(s);
  std::string path = temp_path("cmc_mesh_test.obj");
  MeshStats st = write_obj(surf.r, g.n, path);
  CHECK(st.vertices == 289);
  CHECK(st.faces == 512);
  CHECK(slurp(path) == obj_text(surf.r, g.n));
  std::filesystem::remove(path);
}
