#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "ftle/engine.hpp"
#include "ftle/flows.hpp"
#include "ftle/partition.hpp"
#include "ftle/schedule_sim.hpp"

using ftle::DeviceProfile;
using ftle::Partition;
using ftle::Submission;

TEST_CASE("partition reproduces the worked split", "[partition]") {
    const Partition part = ftle::partition_range(100000, 2, 3);
    CHECK(part.used == 2);
    CHECK(part.offsets == std::vector<std::int64_t>{0, 50000, 0});
    CHECK(part.ranges == std::vector<std::int64_t>{50000, 50000, 1});
    CHECK(part.begin(0) == 0);
    CHECK(part.end(0) == 50000);   // covers [0, 49999]
    CHECK(part.end(1) == 100000);  // covers [50000, 99999]
}

TEST_CASE("partition handles single device and remainders", "[partition]") {
    const Partition whole = ftle::partition_range(10, 1, 1);
    CHECK(whole.offsets == std::vector<std::int64_t>{0});
    CHECK(whole.ranges == std::vector<std::int64_t>{10});

    const Partition uneven = ftle::partition_range(10, 3, 4);
    CHECK(uneven.offsets == std::vector<std::int64_t>{0, 3, 6, 0});
    CHECK(uneven.ranges == std::vector<std::int64_t>{3, 3, 4, 1});
}

TEST_CASE("partition rejects invalid device counts", "[partition]") {
    CHECK_THROWS_AS(ftle::partition_range(10, 0, 3), ftle::invalid_partition_error);
    CHECK_THROWS_AS(ftle::partition_range(10, 4, 3), ftle::invalid_partition_error);
    CHECK_THROWS_AS(ftle::partition_range(3, 4, 4), ftle::invalid_partition_error);
}

TEST_CASE("partition property suite: disjoint, covering, remainder to last",
          "[partition]") {
    std::mt19937 rng(1357911);
    std::uniform_int_distribution<int> used_dist(1, 8);
    for (int trial = 0; trial < 1000; ++trial) {
        const int used = used_dist(rng);
        std::uniform_int_distribution<int> max_dist(used, 12);
        const int max_devices = max_dist(rng);
        std::uniform_int_distribution<std::int64_t> n_dist(used, used * 50);
        const std::int64_t n = n_dist(rng);

        const Partition part = ftle::partition_range(n, used, max_devices);
        REQUIRE(part.offsets.size() == static_cast<std::size_t>(max_devices));
        REQUIRE(part.ranges.size() == static_cast<std::size_t>(max_devices));

        REQUIRE(part.offsets[0] == 0);
        std::int64_t sum = 0;
        const std::int64_t chunk = n / used;
        for (int d = 0; d < used; ++d) {
            if (d + 1 < used) {
                REQUIRE(part.end(d) == part.begin(d + 1)); // contiguous, disjoint
                REQUIRE(part.ranges[static_cast<std::size_t>(d)] == chunk);
            } else {
                REQUIRE(part.ranges[static_cast<std::size_t>(d)] == chunk + n % used);
            }
            sum += part.ranges[static_cast<std::size_t>(d)];
        }
        REQUIRE(sum == n);
        for (int d = used; d < max_devices; ++d) {
            REQUIRE(part.offsets[static_cast<std::size_t>(d)] == 0);
            REQUIRE(part.ranges[static_cast<std::size_t>(d)] == 1);
        }
    }
}

TEST_CASE("dependencies arise only from overlapping writes on one buffer",
          "[schedule]") {
    const auto edges_of = [](const Submission& a, const Submission& b) {
        return ftle::detect_dependencies({a, b});
    };

    const Submission first{0, {0, 0, 512}, 512, 0};
    const Submission disjoint{1, {0, 512, 488}, 488, 1};
    CHECK(edges_of(first, disjoint).empty());

    const Submission overlapping{1, {0, 500, 500}, 500, 1};
    const auto edges = edges_of(first, overlapping);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0] == std::pair<std::size_t, std::size_t>{0, 1});

    const Submission other_buffer{1, {7, 0, 512}, 512, 1};
    CHECK(edges_of(first, other_buffer).empty());
}

TEST_CASE("overlap serializes, disjoint regions run concurrently", "[schedule]") {
    const std::vector<DeviceProfile> two{{0, 1.0}, {1, 1.0}};

    const std::vector<Submission> serial{{0, {0, 0, 512}, 512, 0},
                                         {1, {0, 500, 500}, 500, 1}};
    const ftle::ScheduleResult s = ftle::simulate_schedule(serial, two);
    CHECK(s.events[0].finish <= s.events[1].start); // no time overlap
    CHECK(s.makespan == 1012.0);

    const std::vector<Submission> parallel{{0, {0, 0, 512}, 512, 0},
                                           {1, {0, 512, 488}, 488, 1}};
    const ftle::ScheduleResult p = ftle::simulate_schedule(parallel, two);
    CHECK(p.events[0].start == 0.0);
    CHECK(p.events[1].start == 0.0);
    CHECK(p.events[1].start < p.events[0].finish); // overlap in time
    CHECK(p.makespan == 512.0);
}

TEST_CASE("a device executes its own queue in submission order", "[schedule]") {
    const std::vector<DeviceProfile> one{{0, 2.0}};
    const std::vector<Submission> subs{{0, {0, 0, 10}, 10, 0}, {0, {1, 0, 10}, 30, 1}};
    const ftle::ScheduleResult res = ftle::simulate_schedule(subs, one);
    CHECK(res.events[0].finish == 5.0);
    CHECK(res.events[1].start == 5.0); // same device, no data overlap
    CHECK(res.events[1].finish == 20.0);
    CHECK(res.makespan == 20.0);
}

TEST_CASE("heterogeneous split times reproduce the modeled observation",
          "[schedule]") {
    const double W = 1000.0;

    // four devices, two fast and two slow: the slow quarter dominates
    const std::vector<DeviceProfile> mixed{{0, 4.0}, {1, 4.0}, {2, 1.0}, {3, 1.0}};
    const auto quarters = ftle::split_submissions(1000, 4);
    const ftle::ScheduleResult four = ftle::simulate_schedule(quarters, mixed);
    CHECK(four.makespan == W / 4.0);

    // whole job on one fast device takes the same time
    const auto whole = ftle::split_submissions(1000, 1);
    CHECK(ftle::simulate_schedule(whole, mixed).makespan == W / 4.0);

    // two fast devices alone beat the mixed four
    const std::vector<DeviceProfile> fast{{0, 4.0}, {1, 4.0}};
    const auto halves = ftle::split_submissions(1000, 2);
    const ftle::ScheduleResult two = ftle::simulate_schedule(halves, fast);
    CHECK(two.makespan == W / 8.0);
    CHECK(two.makespan < four.makespan);
}

TEST_CASE("fully overlapping submissions serialize end to end", "[schedule]") {
    const std::vector<DeviceProfile> two{{0, 1.0}, {1, 1.0}};
    const std::vector<Submission> subs{{0, {0, 0, 100}, 700, 0},
                                       {1, {0, 0, 100}, 700, 1}};
    const ftle::ScheduleResult res = ftle::simulate_schedule(subs, two);
    CHECK(res.makespan == 1400.0);
}

TEST_CASE("simulator rejects unknown devices and bad speeds", "[schedule]") {
    const std::vector<Submission> subs{{5, {0, 0, 10}, 10, 0}};
    CHECK_THROWS_AS(ftle::simulate_schedule(subs, {{0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(ftle::simulate_schedule(subs, {{5, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(ftle::simulate_schedule(subs, {{5, -2.0}}), std::invalid_argument);
}

TEST_CASE("adding a device no slower than the slowest used cannot hurt",
          "[schedule]") {
    // the literal "any positive speed" form is false (a near-zero device
    // would own one chunk and dominate), so the property is tested with the
    // added device at least as fast as the slowest existing one
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> speed_dist(0.5, 8.0);
    std::uniform_int_distribution<int> k_dist(1, 6);
    std::uniform_int_distribution<std::int64_t> base_dist(1, 40);

    for (int trial = 0; trial < 200; ++trial) {
        const int k = k_dist(rng);
        const std::int64_t work = base_dist(rng) * k * (k + 1); // divisible by both
        std::vector<DeviceProfile> profiles;
        double slowest = 1e300;
        for (int d = 0; d < k; ++d) {
            profiles.push_back({d, speed_dist(rng)});
            slowest = std::min(slowest, profiles.back().speed);
        }
        const double before =
            ftle::simulate_schedule(ftle::split_submissions(work, k), profiles).makespan;

        profiles.push_back({k, slowest + speed_dist(rng)});
        const double after =
            ftle::simulate_schedule(ftle::split_submissions(work, k + 1), profiles)
                .makespan;
        REQUIRE(after <= before);
    }
}

TEST_CASE("parallel pipeline output is independent of worker count", "[engine]") {
    const ftle::Mesh mesh = ftle::generate_grid_2d(9, 5, {0.0, 2.0}, {0.0, 1.0});
    const ftle::Flowmap fm =
        ftle::integrate_flowmap(mesh, ftle::DoubleGyre{}, 0.0, 5.0, 25);

    const ftle::ParallelResult base = ftle::run_parallel(mesh, fm, 5.0, 1, 1);
    CHECK(base.degenerate_points == 0);
    CHECK(base.index.face_ids == ftle::build_face_index(mesh).face_ids);

    for (const int workers : {2, 3, 4}) {
        const ftle::ParallelResult run = ftle::run_parallel(mesh, fm, 5.0, workers, workers);
        REQUIRE(run.field.values.size() == base.field.values.size());
        REQUIRE(std::memcmp(run.field.values.data(), base.field.values.data(),
                            base.field.values.size() * sizeof(double)) == 0);
        REQUIRE(run.index.offsets == base.index.offsets);
        REQUIRE(run.index.face_ids == base.index.face_ids);
        REQUIRE(run.preprocess_times.size() == static_cast<std::size_t>(workers));
        REQUIRE(run.timing.ftle_seconds >= 0.0);
    }
}

TEST_CASE("engine propagates the partition preconditions", "[engine]") {
    const ftle::Mesh mesh = ftle::generate_grid_2d(3, 2, {0.0, 1.0}, {0.0, 1.0});
    ftle::Flowmap fm;
    fm.values = mesh.coords;
    CHECK_THROWS_AS(ftle::run_parallel(mesh, fm, 1.0, 7, 7),
                    ftle::invalid_partition_error); // 6 points, 7 workers
    CHECK_THROWS_AS(ftle::run_parallel(mesh, fm, 1.0, 2, 1),
                    ftle::invalid_partition_error);
}

TEST_CASE("per-range incidence work matches the index segments", "[engine]") {
    ftle::Mesh mesh;
    mesh.dim = 2;
    mesh.n_points = 4;
    mesh.n_faces = 2;
    mesh.verts_per_face = 3;
    mesh.coords = {0, 0, 1, 0, 0, 1, 1, 1};
    mesh.faces = {0, 1, 2, 1, 3, 2};
    ftle::Flowmap fm;
    fm.values = mesh.coords;

    const ftle::ParallelResult one = ftle::run_parallel(mesh, fm, 1.0, 1, 1);
    CHECK(one.incidence_work == std::vector<std::int64_t>{6});

    const ftle::ParallelResult two = ftle::run_parallel(mesh, fm, 1.0, 2, 2);
    CHECK(two.incidence_work == std::vector<std::int64_t>{3, 3});
}

TEST_CASE("timing csv lists per-run rows and a mean aggregate", "[engine]") {
    const auto path = std::filesystem::temp_directory_path() / "ftle_times_test.csv";
    std::vector<ftle::StageTiming> runs{{0.5, 1.5}, {1.0, 2.0}};
    ftle::write_timing_csv(runs, 2, path.string());

    std::ifstream in(path);
    std::string text(std::istreambuf_iterator<char>(in), {});
    CHECK(text ==
          "stage,workers,run,seconds\n"
          "preprocess,2,0,0.5\n"
          "ftle,2,0,1.5\n"
          "preprocess,2,1,1\n"
          "ftle,2,1,2\n"
          "preprocess,2,mean,0.75\n"
          "ftle,2,mean,1.75\n");
    std::filesystem::remove(path);
}
