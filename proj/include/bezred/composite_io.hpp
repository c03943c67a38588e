#ifndef BEZRED_COMPOSITE_IO_HPP
#define BEZRED_COMPOSITE_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bezred/reducer.hpp"

namespace bezred {

/// One segment of a composite curve file:
///   segment <name> n=<int> m=<int> N=<int> alpha=<int> beta=<int> [box=<lx>,<ux>,<ly>,<uy>]
/// followed by n+1 lines of "x y". Segments are blank-line separated.
/// Names are single whitespace-free tokens. Without an explicit box, the
/// componentwise min/max of the segment's control points is used.
struct SegmentSpec {
    std::string name;
    int m = 0;
    int N = 0;
    int alpha = 0;
    int beta = 0;
    std::optional<BoxPair> box;
    std::vector<Point2> points;

    int degree() const { return static_cast<int>(points.size()) - 1; }
    ReductionRequest to_request() const;
};

struct CompositeCurveFile {
    std::vector<SegmentSpec> segments;
};

/// Parses and validates; throws ParseError with a line number on any defect.
CompositeCurveFile load_composite(const std::filesystem::path& path);
CompositeCurveFile parse_composite(std::istream& in);

/// Full-precision serialization; load(serialize(f)) is value-identical.
std::string serialize_composite(const CompositeCurveFile& file);
void save_composite(const CompositeCurveFile& file, const std::filesystem::path& path);

struct SegmentOutcome {
    const SegmentSpec* spec = nullptr;
    std::optional<ReductionReport> traditional;
    std::optional<ReductionReport> boxed;
    std::string error; // nonempty when the solver failed on this segment
};

struct ReduceRunOptions {
    Backend backend = Backend::DualIncremental;
    bool traditional_only = false;
    bool parallel = true;
    std::optional<std::filesystem::path> csv_path;
    std::optional<std::filesystem::path> svg_path;
};

/// Reduces every segment (traditional and, unless disabled, box-constrained),
/// writes the CSV/SVG artifacts, and reports one row per segment on `out`.
/// Returns 0 on success, 2 when any segment's solve failed.
int run_reduce(const CompositeCurveFile& file, const ReduceRunOptions& options, std::ostream& out);

/// One CSV row per segment:
///   name,n,m,N,alpha,beta,E_traditional,Einf_traditional,E_boxed,Einf_boxed
std::string make_csv(const std::vector<SegmentOutcome>& outcomes);

/// Overlay of the original curves (blue, solid), the reduced curves (red,
/// dashed) and the reduced control points (continuity-fixed green, box-
/// restricted red) in a fixed 1000x1000 viewport, bounding box fit with a
/// 5% margin.
std::string make_svg(const std::vector<SegmentOutcome>& outcomes);

struct BenchResult {
    double dual_seconds = 0.0;    // median over repetitions
    double normal_seconds = 0.0;  // median over repetitions
    double speedup = 0.0;         // normal / dual
    double max_coord_diff = 0.0;  // backend agreement on the solved curves
    int repetitions = 0;
    int inner_loops = 0;
};

/// Times the full box-constrained composite under both backends, single
/// threaded, each repetition solving the composite `inner_loops` times.
/// The error metrics are not part of the timed region.
BenchResult run_bench(const CompositeCurveFile& file, int repetitions, int inner_loops = 100);

void print_bench(const BenchResult& r, std::ostream& out);

} // namespace bezred

#endif
