#include <algorithm>

#include "doctest.h"
#include "fairsched/io.hpp"

using namespace fairsched;

TEST_CASE("instance round trip") {
  const auto inst = Instance::from_matrix({{1, 2, 3}, {4, 5, 6}});
  const auto text = instance_to_json(inst);
  CHECK(text == "{\"n\":3,\"m\":2,\"day_invariant\":false,\"p\":[[1,2,3],[4,5,6]]}\n");
  CHECK(parse_instance(text) == inst);
  CHECK(instance_to_json(parse_instance(text)) == text);

  const auto inv = Instance::day_invariant({1, 2}, 2);
  const auto t2 = instance_to_json(inv);
  CHECK(t2 == "{\"n\":2,\"m\":2,\"day_invariant\":true,\"p\":[[1,2]]}\n");
  CHECK(parse_instance(t2) == inv);
}

TEST_CASE("identical rows are normalized") {
  const auto inst = parse_instance(R"({"n":2,"m":2,"day_invariant":false,"p":[[1,2],[1,2]]})");
  CHECK(inst.is_day_invariant());
  CHECK(inst == Instance::day_invariant({1, 2}, 2));
}

TEST_CASE("malformed instances") {
  CHECK_THROWS_AS(parse_instance("not json"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"n":2,"m":1,"p":[[1]]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"n":1,"m":2,"p":[[1]]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"n":1,"m":1,"p":[[0]]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"n":1,"m":1,"p":[[-3]]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"n":1,"m":1,"p":[["a"]]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"n":1,"m":1})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"n":2,"m":2,"day_invariant":true,"p":[[1,2],[2,1]]})"),
                  InputError);
}

TEST_CASE("schedule round trip") {
  const Schedule s({{1, 0, 2}, {2, 1, 0}});
  const auto text = schedule_to_json(s);
  CHECK(text == "{\"perms\":[[2,1,3],[3,2,1]]}\n");
  CHECK(parse_schedule(text) == s);
  CHECK_THROWS_AS(parse_schedule(R"({"perms":[[0,1]]})"), InputError);
  CHECK_THROWS_AS(parse_schedule(R"({"orders":[[1]]})"), InputError);
}

TEST_CASE("generator is deterministic") {
  GeneratorSpec spec;
  spec.clients = 6;
  spec.days = 3;
  spec.seed = 42;
  const auto a = instance_to_json(generate_instance(spec));
  CHECK(a == instance_to_json(generate_instance(spec)));
  spec.seed = 43;
  CHECK(a != instance_to_json(generate_instance(spec)));
  spec.day_invariant = true;
  CHECK(generate_instance(spec).is_day_invariant());
}

TEST_CASE("generator respects the range") {
  GeneratorSpec spec;
  spec.clients = 40;
  spec.days = 5;
  spec.p_min = 3;
  spec.p_max = 7;
  spec.seed = 1;
  const auto inst = generate_instance(spec);
  for (const auto& row : inst.matrix())
    for (Time p : row) CHECK((p >= 3 && p <= 7));
  spec.p_min = 8;
  CHECK_THROWS_AS(generate_instance(spec), InputError);
  spec.p_min = 0;
  CHECK_THROWS_AS(generate_instance(spec), InputError);
}

TEST_CASE("two-point counts") {
  GeneratorSpec spec;
  spec.clients = 50;
  spec.days = 3;
  spec.p_min = 1;
  spec.p_max = 100;
  spec.distribution = Distribution::kTwoPoint;
  spec.heavy_fraction = 0.1;
  spec.seed = 5;
  for (const auto& row : generate_instance(spec).matrix()) {
    CHECK(std::count(row.begin(), row.end(), 100) == 5);
    CHECK(std::count(row.begin(), row.end(), 1) == 45);
  }
}

TEST_CASE("unit distribution") {
  GeneratorSpec spec;
  spec.clients = 7;
  spec.days = 10;
  spec.distribution = Distribution::kUnit;
  const auto inst = generate_instance(spec);
  CHECK(inst == Instance::day_invariant(std::vector<Time>(7, 1), 10));
  CHECK(inst.all_unit());
}

TEST_CASE("distribution names") {
  CHECK(parse_distribution("uniform") == Distribution::kUniform);
  CHECK(parse_distribution("two-point") == Distribution::kTwoPoint);
  CHECK(parse_distribution("unit") == Distribution::kUnit);
  CHECK_THROWS_AS(parse_distribution("normal"), InputError);
}
