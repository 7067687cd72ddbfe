// Command-line driver: mesh/flowmap generation, the parallel FTLE pipeline,
// benchmarking with repeats, and the heterogeneous schedule simulator.

#include <array>
#include <cstdint>
#include <exception>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ftle/ftle.hpp"

namespace {

std::string fmt(double v) {
    char buf[64];
    char* end = ftle::detail::format_value(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

struct FlowArgs {
    std::string name = "identity";
    double t0 = 0.0;
    double t1 = 1.0;
    int steps = 100;
    double amplitude = 0.1;
    double epsilon = 0.25;
    double omega = 2.0 * std::numbers::pi / 10.0;
    double abc_a = std::numbers::sqrt3;
    double abc_b = std::numbers::sqrt2;
    double abc_c = 1.0;
    std::vector<double> matrix;
    std::vector<double> offset;
};

void add_flow_options(CLI::App* cmd, FlowArgs& args) {
    cmd->add_option("--flow", args.name, "identity, double-gyre, abc, or affine")
        ->check(CLI::IsMember({"identity", "double-gyre", "abc", "affine"}));
    cmd->add_option("--t0", args.t0, "integration start time");
    cmd->add_option("--t1", args.t1, "integration end time");
    cmd->add_option("--steps", args.steps, "fixed RK4 step count");
    cmd->add_option("--amplitude", args.amplitude, "double-gyre amplitude");
    cmd->add_option("--epsilon", args.epsilon, "double-gyre gyre distortion");
    cmd->add_option("--omega", args.omega, "double-gyre angular frequency");
    cmd->add_option("--abc-a", args.abc_a, "ABC coefficient A");
    cmd->add_option("--abc-b", args.abc_b, "ABC coefficient B");
    cmd->add_option("--abc-c", args.abc_c, "ABC coefficient C");
    cmd->add_option("--matrix", args.matrix, "affine matrix, row-major comma list")
        ->delimiter(',');
    cmd->add_option("--offset", args.offset, "affine offset, comma list")->delimiter(',');
}

ftle::FlowSpec make_flow(const FlowArgs& args, int dim) {
    if (args.name == "identity") return ftle::IdentityFlow{};
    if (args.name == "double-gyre") {
        if (dim != 2)
            throw ftle::error("double-gyre flow needs a 2D mesh, got dim " +
                              std::to_string(dim));
        return ftle::DoubleGyre{args.amplitude, args.epsilon, args.omega};
    }
    if (args.name == "abc") {
        if (dim != 3)
            throw ftle::error("abc flow needs a 3D mesh, got dim " + std::to_string(dim));
        return ftle::AbcFlow{args.abc_a, args.abc_b, args.abc_c};
    }
    ftle::AffineFlow aff;
    aff.dim = dim;
    const auto need = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
    if (args.matrix.size() != need)
        throw ftle::error("--matrix needs " + std::to_string(need) + " values for dim " +
                          std::to_string(dim));
    for (std::size_t k = 0; k < need; ++k) aff.matrix[k] = args.matrix[k];
    if (!args.offset.empty()) {
        if (args.offset.size() != static_cast<std::size_t>(dim))
            throw ftle::error("--offset needs " + std::to_string(dim) + " values");
        for (int d = 0; d < dim; ++d) aff.offset[static_cast<std::size_t>(d)] =
            args.offset[static_cast<std::size_t>(d)];
    }
    return aff;
}

int run_generate_mesh(int dim, int nx, int ny, int nz, double xmin, double xmax,
                      double ymin, double ymax, double zmin, double zmax,
                      const std::string& coords_path, const std::string& faces_path) {
    ftle::Mesh mesh;
    if (dim == 2)
        mesh = ftle::generate_grid_2d(nx, ny, {xmin, xmax}, {ymin, ymax});
    else
        mesh = ftle::generate_grid_3d(nx, ny, nz,
                                      {{{xmin, xmax}, {ymin, ymax}, {zmin, zmax}}});
    ftle::write_mesh(mesh, coords_path, faces_path);
    std::cout << "wrote " << coords_path << " and " << faces_path << ": "
              << mesh.n_points << " points, " << mesh.n_faces << " faces\n";
    return 0;
}

int run_generate_flowmap(const std::string& coords_path, const FlowArgs& args,
                         const std::string& out_path) {
    const ftle::CoordTable coords = ftle::read_coordinates(coords_path);
    ftle::Mesh mesh;
    mesh.dim = coords.cols;
    mesh.n_points = coords.rows;
    mesh.n_faces = 0;
    mesh.verts_per_face = coords.cols + 1;
    mesh.coords = coords.values;

    const ftle::FlowSpec spec = make_flow(args, mesh.dim);
    const ftle::Flowmap flowmap =
        ftle::integrate_flowmap(mesh, spec, args.t0, args.t1, args.steps);
    ftle::write_flowmap(flowmap, mesh.dim, out_path);
    std::cout << "wrote " << out_path << ": " << mesh.n_points << " rows\n";
    return 0;
}

int run_compute(const std::string& coords_path, const std::string& faces_path,
                const std::string& flowmap_path, double t_eval, int workers,
                int max_workers, int repeats, const std::string& field_path,
                const std::string& times_path) {
    const ftle::Mesh mesh = ftle::read_mesh(coords_path, faces_path);
    const ftle::Flowmap flowmap = ftle::read_flowmap(flowmap_path, mesh);
    if (max_workers < workers) max_workers = workers;

    std::vector<ftle::StageTiming> runs;
    runs.reserve(static_cast<std::size_t>(repeats));
    ftle::ParallelResult result;
    for (int r = 0; r < repeats; ++r) {
        result = ftle::run_parallel(mesh, flowmap, t_eval, workers, max_workers);
        runs.push_back(result.timing);
    }

    if (!field_path.empty()) ftle::write_scalar_table(result.field.values, field_path);
    if (!times_path.empty()) ftle::write_timing_csv(runs, workers, times_path);

    double pre_mean = 0.0, ftle_mean = 0.0;
    for (const auto& run : runs) {
        pre_mean += run.preprocess_seconds;
        ftle_mean += run.ftle_seconds;
    }
    pre_mean /= static_cast<double>(repeats);
    ftle_mean /= static_cast<double>(repeats);

    std::cout << "points " << mesh.n_points << ", workers " << workers << ", repeats "
              << repeats << '\n'
              << "preprocess mean " << fmt(pre_mean) << " s, ftle mean "
              << fmt(ftle_mean) << " s\n"
              << "degenerate points: " << result.degenerate_points << '\n';
    return 0;
}

int run_simulate(const std::vector<double>& speeds, std::int64_t work, int split) {
    if (speeds.empty()) throw ftle::error("--speeds needs at least one value");
    if (split <= 0) split = static_cast<int>(speeds.size());
    if (static_cast<std::size_t>(split) > speeds.size())
        throw ftle::error("--split exceeds the number of devices");

    std::vector<ftle::DeviceProfile> profiles;
    profiles.reserve(speeds.size());
    for (std::size_t d = 0; d < speeds.size(); ++d)
        profiles.push_back({static_cast<int>(d), speeds[d]});

    const std::vector<ftle::Submission> subs = ftle::split_submissions(work, split);
    const ftle::ScheduleResult sched = ftle::simulate_schedule(subs, profiles);

    for (std::size_t j = 0; j < subs.size(); ++j) {
        const auto& sub = subs[j];
        const auto& ev = sched.events[j];
        std::cout << "device " << sub.device << " speed " << fmt(speeds[static_cast<std::size_t>(sub.device)])
                  << ": items [" << sub.region.offset << ','
                  << sub.region.offset + sub.region.length - 1 << "] start "
                  << fmt(ev.start) << " finish " << fmt(ev.finish) << '\n';
    }
    std::cout << "makespan " << fmt(sched.makespan) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallel FTLE engine over unstructured simplex meshes"};
    app.require_subcommand(1);

    // generate-mesh
    int dim = 2, nx = 2, ny = 2, nz = 2;
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0, zmin = 0.0, zmax = 1.0;
    std::string coords_path, faces_path, flowmap_path, field_path, times_path;
    auto* gen_mesh = app.add_subcommand("generate-mesh", "write a triangulated grid");
    gen_mesh->add_option("--dim", dim)->check(CLI::IsMember({2, 3}));
    gen_mesh->add_option("--nx", nx, "points along x");
    gen_mesh->add_option("--ny", ny, "points along y");
    gen_mesh->add_option("--nz", nz, "points along z (dim 3)");
    gen_mesh->add_option("--xmin", xmin);
    gen_mesh->add_option("--xmax", xmax);
    gen_mesh->add_option("--ymin", ymin);
    gen_mesh->add_option("--ymax", ymax);
    gen_mesh->add_option("--zmin", zmin);
    gen_mesh->add_option("--zmax", zmax);
    gen_mesh->add_option("--out-coords", coords_path)->required();
    gen_mesh->add_option("--out-faces", faces_path)->required();

    // generate-flowmap
    FlowArgs flow_args;
    std::string fm_coords, fm_out;
    auto* gen_fm = app.add_subcommand("generate-flowmap", "advect mesh points through a flow");
    gen_fm->add_option("--coords", fm_coords)->required()->check(CLI::ExistingFile);
    gen_fm->add_option("--out", fm_out)->required();
    add_flow_options(gen_fm, flow_args);

    // compute / bench
    double t_eval = 1.0;
    int workers = 1, max_workers = 0, repeats = 1;
    auto* compute = app.add_subcommand("compute", "preprocessing + FTLE field");
    auto* bench = app.add_subcommand("bench", "compute with timing repeats");
    for (CLI::App* cmd : {compute, bench}) {
        cmd->add_option("--coords", coords_path)->required()->check(CLI::ExistingFile);
        cmd->add_option("--faces", faces_path)->required()->check(CLI::ExistingFile);
        cmd->add_option("--flowmap", flowmap_path)->required()->check(CLI::ExistingFile);
        cmd->add_option("--t-eval", t_eval, "interval length divisor")->required();
        cmd->add_option("--workers", workers, "concurrent workers");
        cmd->add_option("--max-workers", max_workers, "partition slot count");
        cmd->add_option("--out-field", field_path, "field file path");
        cmd->add_option("--out-times", times_path, "timing CSV path");
    }
    bench->add_option("--repeats", repeats, "timing repetitions")->default_val(30);

    // simulate
    std::vector<double> speeds;
    std::int64_t sim_work = 1000;
    int split = 0;
    auto* simulate = app.add_subcommand("simulate", "heterogeneous schedule model");
    simulate->add_option("--speeds", speeds, "relative device speeds, comma list")
        ->required()
        ->delimiter(',');
    simulate->add_option("--work", sim_work, "total work items");
    simulate->add_option("--split", split, "devices to split across (default: all)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_mesh->parsed())
            return run_generate_mesh(dim, nx, ny, nz, xmin, xmax, ymin, ymax, zmin, zmax,
                                     coords_path, faces_path);
        if (gen_fm->parsed()) return run_generate_flowmap(fm_coords, flow_args, fm_out);
        if (compute->parsed())
            return run_compute(coords_path, faces_path, flowmap_path, t_eval, workers,
                               max_workers, 1, field_path, times_path);
        if (bench->parsed())
            return run_compute(coords_path, faces_path, flowmap_path, t_eval, workers,
                               max_workers, repeats, field_path, times_path);
        if (simulate->parsed()) return run_simulate(speeds, sim_work, split);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
