#pragma once

#include <vector>

namespace pmheat {

/// Logarithmic grid in radial frequency rho = |xi|.
/// Nodes rho_j = rho_min * r^j with r = (rho_max/rho_min)^{1/(count-1)}.
class RadialGrid {
public:
    RadialGrid(double rho_min, double rho_max, int count);

    /// Defaults wide enough that all desk experiments attain their suprema
    /// strictly inside: [1e-4, 1e3] with 512 nodes.
    static RadialGrid standard() { return RadialGrid(1e-4, 1e3, 512); }

    double rho_min() const { return rho_min_; }
    double rho_max() const { return rho_max_; }
    int count() const { return count_; }
    double log_step() const { return log_step_; }
    double ratio() const;

    /// Node value for any integer index; indices outside [0, count) address
    /// the same logarithmic lattice extended beyond the grid.
    double node(int j) const;
    const std::vector<double>& nodes() const { return nodes_; }

    bool operator==(const RadialGrid& other) const;

private:
    double rho_min_ = 0.0;
    double rho_max_ = 0.0;
    int count_ = 0;
    double log_min_ = 0.0;
    double log_step_ = 0.0;
    std::vector<double> nodes_;
};

/// Time grid for trajectories: t_0 = 0, a short linear ramp over
/// [0, 0.01 t_end] (8 steps), then geometric growth to t_end.
class TimeGrid {
public:
    TimeGrid(double t_end, int count);
    explicit TimeGrid(std::vector<double> nodes);

    static TimeGrid standard(double t_end = 4.0, int count = 64) {
        return TimeGrid(t_end, count);
    }

    int count() const { return static_cast<int>(nodes_.size()); }
    double node(int m) const { return nodes_[static_cast<std::size_t>(m)]; }
    double t_end() const { return nodes_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }

    /// Node-wise scaled copy (exact multiplication, no re-derivation).
    TimeGrid scaled(double factor) const;

    bool operator==(const TimeGrid& other) const { return nodes_ == other.nodes_; }

private:
    std::vector<double> nodes_;
};

} // namespace pmheat
