#include "bezred/composite_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>

#include "bezred/errors.hpp"

namespace bezred {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

double parse_double(const std::string& s, int line_no, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(line_no, std::string("expected a number for ") + what + ", got '" + s + "'");
    }
    if (pos != s.size() || std::isnan(v))
        throw ParseError(line_no, std::string("malformed number for ") + what + ": '" + s + "'");
    return v;
}

int parse_int(const std::string& s, int line_no, const char* what) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(line_no, std::string("expected an integer for ") + what + ", got '" + s + "'");
    }
    if (pos != s.size())
        throw ParseError(line_no, std::string("malformed integer for ") + what + ": '" + s + "'");
    return v;
}

} // namespace

ReductionRequest SegmentSpec::to_request() const {
    BezierCurve curve(points);
    BoxPair effective = box ? *box : default_box(curve);
    return ReductionRequest{
        .curve = std::move(curve),
        .m = m,
        .orders = ContinuityOrders{alpha, beta},
        .box = effective,
        .N = N,
    };
}

CompositeCurveFile parse_composite(std::istream& in) {
    CompositeCurveFile file;
    std::string line;
    int line_no = 0;
    int expected_points = -1; // >= 0 while collecting points of a segment
    int header_line = 0;

    auto finish_segment = [&] {
        if (expected_points > 0)
            throw ParseError(line_no, "segment '" + file.segments.back().name + "' ends after " +
                                          std::to_string(file.segments.back().points.size()) +
                                          " control points, expected " +
                                          std::to_string(file.segments.back().points.size() +
                                                         static_cast<std::size_t>(expected_points)));
        if (!file.segments.empty() && expected_points == 0) {
            const SegmentSpec& seg = file.segments.back();
            if (seg.m >= seg.degree())
                throw ParseError(header_line,
                                 "segment '" + seg.name + "': m=" + std::to_string(seg.m) +
                                     " must be below the segment degree n=" + std::to_string(seg.degree()));
            try {
                validate_request(seg.to_request());
            } catch (const std::exception& e) {
                throw ParseError(header_line, "segment '" + seg.name + "': " + e.what());
            }
            expected_points = -1;
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            finish_segment();
            continue;
        }
        if (expected_points > 0) {
            std::vector<std::string> toks = split_ws(line);
            if (toks.size() != 2)
                throw ParseError(line_no, "expected 'x y', got '" + line + "'");
            Point2 p{parse_double(toks[0], line_no, "x"), parse_double(toks[1], line_no, "y")};
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw ParseError(line_no, "control point coordinates must be finite");
            file.segments.back().points.push_back(p);
            if (--expected_points == 0) finish_segment();
            continue;
        }

        std::vector<std::string> toks = split_ws(line);
        if (toks.empty() || toks[0] != "segment")
            throw ParseError(line_no, "expected a 'segment' header, got '" + line + "'");
        if (toks.size() < 2 || toks[1].find('=') != std::string::npos)
            throw ParseError(line_no, "segment header needs a name");

        SegmentSpec seg;
        seg.name = toks[1];
        header_line = line_no;
        int n = -1;
        bool have_m = false, have_N = false, have_alpha = false, have_beta = false;
        for (std::size_t i = 2; i < toks.size(); ++i) {
            const std::size_t eq = toks[i].find('=');
            if (eq == std::string::npos)
                throw ParseError(line_no, "expected key=value, got '" + toks[i] + "'");
            const std::string key = toks[i].substr(0, eq);
            const std::string value = toks[i].substr(eq + 1);
            if (key == "n") {
                n = parse_int(value, line_no, "n");
            } else if (key == "m") {
                seg.m = parse_int(value, line_no, "m");
                have_m = true;
            } else if (key == "N") {
                seg.N = parse_int(value, line_no, "N");
                have_N = true;
            } else if (key == "alpha") {
                seg.alpha = parse_int(value, line_no, "alpha");
                have_alpha = true;
            } else if (key == "beta") {
                seg.beta = parse_int(value, line_no, "beta");
                have_beta = true;
            } else if (key == "box") {
                std::vector<std::string> parts;
                std::istringstream ss(value);
                std::string piece;
                while (std::getline(ss, piece, ',')) parts.push_back(piece);
                if (parts.size() != 4)
                    throw ParseError(line_no, "box needs four comma-separated numbers lx,ux,ly,uy");
                BoxPair bp;
                bp.first.lower = parse_double(parts[0], line_no, "box lx");
                bp.first.upper = parse_double(parts[1], line_no, "box ux");
                bp.second.lower = parse_double(parts[2], line_no, "box ly");
                bp.second.upper = parse_double(parts[3], line_no, "box uy");
                if (!(bp.first.lower <= bp.first.upper) || !(bp.second.lower <= bp.second.upper))
                    throw ParseError(line_no, "box must satisfy lx <= ux and ly <= uy");
                seg.box = bp;
            } else {
                throw ParseError(line_no, "unknown key '" + key + "'");
            }
        }
        if (n < 0 || !have_m || !have_N || !have_alpha || !have_beta)
            throw ParseError(line_no, "segment header must set n, m, N, alpha and beta");
        if (n < 1) throw ParseError(line_no, "n must be >= 1");
        seg.points.reserve(static_cast<std::size_t>(n) + 1);
        file.segments.push_back(std::move(seg));
        expected_points = n + 1;
    }
    ++line_no;
    finish_segment();
    if (file.segments.empty()) throw ParseError(line_no, "no segments in file");
    return file;
}

CompositeCurveFile load_composite(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path.string() + "'");
    return parse_composite(in);
}

std::string serialize_composite(const CompositeCurveFile& file) {
    std::ostringstream out;
    bool first = true;
    for (const SegmentSpec& seg : file.segments) {
        if (!first) out << '\n';
        first = false;
        out << "segment " << seg.name << " n=" << seg.degree() << " m=" << seg.m << " N=" << seg.N
            << " alpha=" << seg.alpha << " beta=" << seg.beta;
        if (seg.box)
            out << " box=" << fmt17(seg.box->first.lower) << ',' << fmt17(seg.box->first.upper) << ','
                << fmt17(seg.box->second.lower) << ',' << fmt17(seg.box->second.upper);
        out << '\n';
        for (const Point2& p : seg.points) out << fmt17(p.x) << ' ' << fmt17(p.y) << '\n';
    }
    return out.str();
}

void save_composite(const CompositeCurveFile& file, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << serialize_composite(file);
}

namespace {

SegmentOutcome reduce_one(const SegmentSpec& seg, const ReduceRunOptions& options) {
    SegmentOutcome outcome;
    outcome.spec = &seg;
    try {
        const ReductionRequest req = seg.to_request();
        outcome.traditional = reduce_traditional(req, options.backend);
        if (!options.traditional_only)
            outcome.boxed = reduce_boxed(req, SolveOptions{.backend = options.backend});
    } catch (const std::exception& e) {
        outcome.error = e.what();
    }
    return outcome;
}

} // namespace

int run_reduce(const CompositeCurveFile& file, const ReduceRunOptions& options, std::ostream& out) {
    std::vector<SegmentOutcome> outcomes(file.segments.size());
    if (options.parallel && file.segments.size() > 1) {
        std::vector<std::future<SegmentOutcome>> futures;
        futures.reserve(file.segments.size());
        for (const SegmentSpec& seg : file.segments)
            futures.push_back(std::async(std::launch::async, reduce_one, std::cref(seg), std::cref(options)));
        for (std::size_t i = 0; i < futures.size(); ++i) outcomes[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < file.segments.size(); ++i)
            outcomes[i] = reduce_one(file.segments[i], options);
    }

    bool any_failed = false;
    for (const SegmentOutcome& o : outcomes) {
        out << o.spec->name << " n=" << o.spec->degree() << " m=" << o.spec->m;
        if (!o.error.empty()) {
            out << "  FAILED: " << o.error << '\n';
            any_failed = true;
            continue;
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf), "  E=%.3e Einf=%.3e", o.traditional->error_ls,
                      o.traditional->error_max);
        out << buf;
        if (o.boxed) {
            std::snprintf(buf, sizeof(buf), "  E_boxed=%.3e Einf_boxed=%.3e", o.boxed->error_ls,
                          o.boxed->error_max);
            out << buf;
        }
        out << '\n';
    }

    if (options.csv_path) {
        std::ofstream csv(*options.csv_path);
        if (!csv) throw std::runtime_error("cannot write '" + options.csv_path->string() + "'");
        csv << make_csv(outcomes);
    }
    if (options.svg_path) {
        std::ofstream svg(*options.svg_path);
        if (!svg) throw std::runtime_error("cannot write '" + options.svg_path->string() + "'");
        svg << make_svg(outcomes);
    }
    return any_failed ? 2 : 0;
}

std::string make_csv(const std::vector<SegmentOutcome>& outcomes) {
    std::ostringstream out;
    out << "name,n,m,N,alpha,beta,E_traditional,Einf_traditional,E_boxed,Einf_boxed\n";
    for (const SegmentOutcome& o : outcomes) {
        out << o.spec->name << ',' << o.spec->degree() << ',' << o.spec->m << ',' << o.spec->N << ','
            << o.spec->alpha << ',' << o.spec->beta << ',';
        if (o.error.empty() && o.traditional)
            out << fmt17(o.traditional->error_ls) << ',' << fmt17(o.traditional->error_max);
        else
            out << ',';
        out << ',';
        if (o.error.empty() && o.boxed)
            out << fmt17(o.boxed->error_ls) << ',' << fmt17(o.boxed->error_max);
        else
            out << ',';
        out << '\n';
    }
    return out.str();
}

namespace {

struct Bbox {
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void take(const Point2& p) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
};

constexpr int kSvgSize = 1000;
constexpr int kCurveSamples = 256;

std::vector<Point2> sample_curve(const BezierCurve& c) {
    std::vector<Point2> pts(kCurveSamples + 1);
    for (int k = 0; k <= kCurveSamples; ++k)
        pts[static_cast<std::size_t>(k)] = eval_curve(c, static_cast<double>(k) / kCurveSamples);
    return pts;
}

} // namespace

std::string make_svg(const std::vector<SegmentOutcome>& outcomes) {
    std::vector<std::vector<Point2>> originals, reduced;
    std::vector<const SegmentOutcome*> drawn;
    Bbox box;
    for (const SegmentOutcome& o : outcomes) {
        if (!o.error.empty()) continue;
        const ReductionReport& rep = o.boxed ? *o.boxed : *o.traditional;
        originals.push_back(sample_curve(BezierCurve(o.spec->points)));
        reduced.push_back(sample_curve(rep.result));
        drawn.push_back(&o);
        for (const Point2& p : originals.back()) box.take(p);
        for (const Point2& p : reduced.back()) box.take(p);
        for (const Point2& p : rep.result.points()) box.take(p);
    }

    const double span_x = std::max(box.max_x - box.min_x, 1e-12);
    const double span_y = std::max(box.max_y - box.min_y, 1e-12);
    const double margin = 0.05 * kSvgSize;
    const double scale = (kSvgSize - 2.0 * margin) / std::max(span_x, span_y);
    const double off_x = margin + (kSvgSize - 2.0 * margin - scale * span_x) / 2.0;
    const double off_y = margin + (kSvgSize - 2.0 * margin - scale * span_y) / 2.0;
    auto map = [&](const Point2& p) {
        return Point2{off_x + scale * (p.x - box.min_x),
                      kSvgSize - (off_y + scale * (p.y - box.min_y))};
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgSize << "\" height=\""
        << kSvgSize << "\" viewBox=\"0 0 " << kSvgSize << ' ' << kSvgSize << "\">\n";
    auto path = [&](const std::vector<Point2>& pts, const char* style) {
        out << "  <path d=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Point2 v = map(pts[i]);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%c%.2f %.2f", i == 0 ? 'M' : 'L', v.x, v.y);
            out << buf;
        }
        out << "\" " << style << "/>\n";
    };
    for (const std::vector<Point2>& pts : originals)
        path(pts, "fill=\"none\" stroke=\"blue\" stroke-width=\"2\"");
    for (const std::vector<Point2>& pts : reduced)
        path(pts, "fill=\"none\" stroke=\"red\" stroke-width=\"2\" stroke-dasharray=\"8 6\"");
    for (std::size_t s = 0; s < drawn.size(); ++s) {
        const SegmentOutcome& o = *drawn[s];
        const ReductionReport& rep = o.boxed ? *o.boxed : *o.traditional;
        const int m = rep.result.degree();
        for (int i = 0; i <= m; ++i) {
            const bool fixed = i <= o.spec->alpha || i >= m - o.spec->beta;
            const Point2 v = map(rep.result.point(static_cast<std::size_t>(i)));
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "  <circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"%s\"/>\n", v.x, v.y,
                          fixed ? "green" : "red");
            out << buf;
        }
    }
    out << "</svg>\n";
    return out.str();
}

BenchResult run_bench(const CompositeCurveFile& file, int repetitions, int inner_loops) {
    if (repetitions < 1) throw std::invalid_argument("run_bench: repetitions must be >= 1");
    if (inner_loops < 1) throw std::invalid_argument("run_bench: inner_loops must be >= 1");

    std::vector<ReductionRequest> requests;
    requests.reserve(file.segments.size());
    for (const SegmentSpec& seg : file.segments) requests.push_back(seg.to_request());

    auto solve_all = [&](Backend backend) {
        std::vector<BezierCurve> curves;
        curves.reserve(requests.size());
        for (const ReductionRequest& req : requests)
            curves.push_back(reduce_boxed_curve_only(req, SolveOptions{.backend = backend}));
        return curves;
    };

    auto time_backend = [&](Backend backend) {
        std::vector<double> times(static_cast<std::size_t>(repetitions));
        for (int r = 0; r < repetitions; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            for (int i = 0; i < inner_loops; ++i) solve_all(backend);
            const auto t1 = std::chrono::steady_clock::now();
            times[static_cast<std::size_t>(r)] = std::chrono::duration<double>(t1 - t0).count();
        }
        std::sort(times.begin(), times.end());
        return times[times.size() / 2];
    };

    BenchResult result;
    result.repetitions = repetitions;
    result.inner_loops = inner_loops;

    // Warm-up pass, also used for the cross-backend agreement check.
    const std::vector<BezierCurve> dual_curves = solve_all(Backend::DualIncremental);
    const std::vector<BezierCurve> normal_curves = solve_all(Backend::NormalEquations);
    for (std::size_t s = 0; s < dual_curves.size(); ++s)
        for (int i = 0; i <= dual_curves[s].degree(); ++i) {
            const Point2 a = dual_curves[s].point(static_cast<std::size_t>(i));
            const Point2 b = normal_curves[s].point(static_cast<std::size_t>(i));
            result.max_coord_diff =
                std::max({result.max_coord_diff, std::abs(a.x - b.x), std::abs(a.y - b.y)});
        }

    result.normal_seconds = time_backend(Backend::NormalEquations);
    result.dual_seconds = time_backend(Backend::DualIncremental);
    result.speedup = result.normal_seconds / result.dual_seconds;
    return result;
}

void print_bench(const BenchResult& r, std::ostream& out) {
    char buf[256];
    out << "backend             median total [s]   (" << r.repetitions << " repetitions x "
        << r.inner_loops << " composite solves)\n";
    std::snprintf(buf, sizeof(buf), "normal equations    %12.6f\n", r.normal_seconds);
    out << buf;
    std::snprintf(buf, sizeof(buf), "dual incremental    %12.6f\n", r.dual_seconds);
    out << buf;
    std::snprintf(buf, sizeof(buf), "speedup             %12.3fx\n", r.speedup);
    out << buf;
    std::snprintf(buf, sizeof(buf), "backend agreement   %12.3e max coordinate difference\n",
                  r.max_coord_diff);
    out << buf;
}

} // namespace bezred
