#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <string>

#include "bezred/composite_io.hpp"
#include "bezred/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitSolverError = 2;

bezred::Backend parse_backend(const std::string& name) {
    if (name == "dual") return bezred::Backend::DualIncremental;
    if (name == "normal") return bezred::Backend::NormalEquations;
    throw CLI::ValidationError("--backend must be 'dual' or 'normal'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least-squares Bezier degree reduction with endpoint continuity and box constraints"};
    app.require_subcommand(1);

    std::string reduce_file, bench_file, validate_file;
    std::string backend_name = "dual";
    std::string svg_out, csv_out;
    bool traditional_only = false;
    int reps = 5;
    int inner = 100;

    CLI::App* reduce = app.add_subcommand("reduce", "reduce every segment and report errors");
    reduce->add_option("file", reduce_file, "composite curve file")->required();
    reduce->add_flag("--traditional", traditional_only, "skip the box-constrained solve");
    reduce->add_option("--svg", svg_out, "write an overlay plot");
    reduce->add_option("--csv", csv_out, "write the per-segment error table");
    reduce->add_option("--backend", backend_name, "subproblem backend: dual|normal")
        ->check(CLI::IsMember({"dual", "normal"}));

    CLI::App* bench = app.add_subcommand("bench", "time both backends on the composite");
    bench->add_option("file", bench_file, "composite curve file")->required();
    bench->add_option("--reps", reps, "timing repetitions (median is reported)")
        ->check(CLI::PositiveNumber);
    bench->add_option("--inner", inner, "composite solves per repetition")
        ->check(CLI::PositiveNumber);

    CLI::App* validate = app.add_subcommand("validate", "parse and validate the file only");
    validate->add_option("file", validate_file, "composite curve file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (reduce->parsed()) {
            const bezred::CompositeCurveFile file = bezred::load_composite(reduce_file);
            bezred::ReduceRunOptions options;
            options.backend = parse_backend(backend_name);
            options.traditional_only = traditional_only;
            if (!svg_out.empty()) options.svg_path = std::filesystem::path(svg_out);
            if (!csv_out.empty()) options.csv_path = std::filesystem::path(csv_out);
            return bezred::run_reduce(file, options, std::cout);
        }
        if (bench->parsed()) {
            const bezred::CompositeCurveFile file = bezred::load_composite(bench_file);
            const bezred::BenchResult result = bezred::run_bench(file, reps, inner);
            bezred::print_bench(result, std::cout);
            return kExitOk;
        }
        if (validate->parsed()) {
            const bezred::CompositeCurveFile file = bezred::load_composite(validate_file);
            std::cout << validate_file << ": " << file.segments.size() << " segment(s) ok\n";
            for (const bezred::SegmentSpec& seg : file.segments)
                std::cout << "  " << seg.name << " n=" << seg.degree() << " m=" << seg.m
                          << " N=" << seg.N << " alpha=" << seg.alpha << " beta=" << seg.beta << '\n';
            return kExitOk;
        }
    } catch (const bezred::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const bezred::SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolverError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolverError;
    }
    return kExitOk;
}
