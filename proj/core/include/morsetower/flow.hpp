#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morsetower/homotopy.hpp"

namespace morse {

enum class Direction { Forward, Backward };

/// Driver for one flow computation: either the static pair (f,g), or a
/// fixed-parameter slice of a ParamHomotopy.
struct FlowSpec {
    std::shared_ptr<const Surface> surface;
    const ScalarField* field = nullptr;          // static driver
    const MorseSmalePair* pair = nullptr;        // critical points for settling
    const ParamHomotopy* homotopy = nullptr;     // nonautonomous driver ...
    std::vector<double> s;                       // ... at these parameter values
    double t_window = 1.0;                       // cutoff T when nonautonomous

    static FlowSpec autonomous(const MorseSmalePair& p);
    static FlowSpec slice(const ParamHomotopy& h, std::vector<double> s_fixed);

    bool is_autonomous() const { return homotopy == nullptr; }
    /// Chart velocity of the negative gradient flow at (t, p).
    Vec2 velocity(double t, const ChartPoint& p) const;
    /// Spot checks: static drivers are time independent; homotopy drivers
    /// match the end fields outside the window.
    void check(const Tolerances& tol) const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ChartPoint> points;
    std::string start_label;
    std::string end_label; // critical point id or "escaped"
    std::optional<double> parameter;
    bool escaped = false;

    const ChartPoint& back() const { return points.back(); }
};

/// Adaptive embedded RK (Dormand-Prince 5(4)) with chart switching and
/// periodic wrapping; settles when the autonomous gradient norm drops under
/// settle_tol near a known critical point, or flags escape at t_max.
/// max_ds > 0 additionally caps the ambient displacement per accepted step,
/// which keeps recorded polylines dense.
Trajectory integrate(const FlowSpec& spec, const ChartPoint& x0, Direction dir, const Tolerances& tol,
                     double max_ds = 0.0);

/// Endpoint of the nonautonomous window [-T, T] (or [T, -T] backward),
/// without settling. No samples are kept.
ChartPoint transport_window(const ParamHomotopy& h, std::span<const double> s, const ChartPoint& from,
                            Direction dir, const Tolerances& tol);

/// The four separatrices of an index-1 point: two unstable branches traced
/// forward, two stable traced backward, in deterministic order (+,-).
std::vector<Trajectory> separatrices(const MorseSmalePair& pair, const std::string& saddle_id,
                                     const Tolerances& tol);

struct FlowLineCount {
    int count = 0; // number of connecting orbits found
    int parity = 0;
    std::vector<Trajectory> witnesses;
};

/// Mod-2 count of autonomous flow lines between points of index gap one.
FlowLineCount count_flow_lines(const MorseSmalePair& pair, const std::string& p_id,
                               const std::string& q_id, const Tolerances& tol);

/// Oriented polyline on the surface with in-surface unit normals; the
/// carrier of separatrix data for crossing counts and miss functions.
struct Arc {
    std::vector<ChartPoint> pts;
    std::vector<Vec3> ambient;
    std::vector<Vec3> normal;

    struct Near {
        double dist = 0;
        double side = 0; // signed: dot(x - proj, normal)
        std::size_t seg = 0;
        double frac = 0;
        Vec3 proj;
    };
    Near nearest(const Vec3& x) const;
    /// Signed distance, continuous near the arc.
    double signed_dist(const Vec3& x) const {
        const Near n = nearest(x);
        return n.side >= 0 ? n.dist : -n.dist;
    }
};

/// Closure of the stable manifold of a saddle: sink-to-sink polyline through
/// the saddle, traced backward. Endpoints are the limiting maxima.
Arc stable_arc(const MorseSmalePair& pair, const std::string& saddle_id, const Tolerances& tol);
/// Closure of the unstable manifold (saddle to minima), traced forward.
Arc unstable_arc(const MorseSmalePair& pair, const std::string& saddle_id, const Tolerances& tol);

/// W^u data of a source critical point at t = -T: a single point for a
/// minimum, the unstable_arc polyline for a saddle.
struct GermSource {
    bool is_point = false;
    ChartPoint point;
    Arc arc;
};
GermSource germ_source(const MorseSmalePair& pair, const std::string& id, const Tolerances& tol);

struct CrossingReport {
    int count = 0;
    int parity = 0;
    std::vector<double> taus;  // source-arc parameters of the crossings
    std::vector<ChartPoint> hits; // transported points at the crossings
    bool tangency = false;
    double min_miss = 1e300;
};

/// Transversal intersections of the window-transported germ curve of
/// `source` with `target`. Throws on detected tangency.
CrossingReport curve_arc_crossings(const ParamHomotopy& h, std::span<const double> s,
                                   const Arc& source, const Arc& target, const Tolerances& tol);

/// Signed miss of the transported point germ against a target arc.
/// Index 0 -> 1 pairs use it forward; 1 -> 2 pairs reduce to the same
/// primitive by transporting the target maximum backward instead.
double miss_point_vs_arc(const ParamHomotopy& h, std::span<const double> s, const ChartPoint& from,
                         const Arc& target, const Tolerances& tol);

struct ContinuationCount {
    int parity = 0;
    int count = 0;
    std::vector<Trajectory> witnesses;
};

/// Mod-2 count of nonautonomous flow lines between equal-index critical
/// points of the two end pairs of an ell=0 homotopy.
ContinuationCount continuation_count(const ParamHomotopy& h, const std::string& p_id,
                                     const std::string& q_id, const Tolerances& tol);

/// End label of the autonomous settle flow started at x (forward: sinks,
/// backward: sources). "escaped" when t_max is exceeded.
std::string settle_label(const MorseSmalePair& pair, const ChartPoint& x, Direction dir,
                         const Tolerances& tol);

void write_trajectory_csv(const Surface& s, const Trajectory& tr, const std::string& path);

} // namespace morse
