#include "pmheat/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace pmheat {

RadialGrid::RadialGrid(double rho_min, double rho_max, int count)
    : rho_min_(rho_min), rho_max_(rho_max), count_(count) {
    if (!(rho_min > 0.0) || !(rho_max > rho_min)) {
        throw std::invalid_argument("RadialGrid: need 0 < rho_min < rho_max");
    }
    if (count < 16) {
        throw std::invalid_argument("RadialGrid: need at least 16 nodes");
    }
    log_min_ = std::log(rho_min_);
    log_step_ = (std::log(rho_max_) - log_min_) / (count_ - 1);
    nodes_.resize(static_cast<std::size_t>(count_));
    for (int j = 0; j < count_; ++j) {
        nodes_[static_cast<std::size_t>(j)] = node(j);
    }
}

double RadialGrid::ratio() const { return std::exp(log_step_); }

double RadialGrid::node(int j) const { return std::exp(log_min_ + j * log_step_); }

bool RadialGrid::operator==(const RadialGrid& other) const {
    return rho_min_ == other.rho_min_ && rho_max_ == other.rho_max_ && count_ == other.count_;
}

TimeGrid::TimeGrid(double t_end, int count) {
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("TimeGrid: t_end must be positive");
    }
    if (count < 8) {
        throw std::invalid_argument("TimeGrid: need at least 8 nodes");
    }
    nodes_.reserve(static_cast<std::size_t>(count));
    const int linear_steps = std::min(8, count - 2);
    const double t_lin = 0.01 * t_end;
    for (int j = 0; j <= linear_steps; ++j) {
        nodes_.push_back(t_lin * j / linear_steps);
    }
    const int geo_steps = count - 1 - linear_steps;
    const double g = std::pow(t_end / t_lin, 1.0 / geo_steps);
    double t = t_lin;
    for (int j = 1; j <= geo_steps; ++j) {
        t *= g;
        nodes_.push_back(j == geo_steps ? t_end : t);
    }
}

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2 || nodes_.front() != 0.0) {
        throw std::invalid_argument("TimeGrid: nodes must start at 0");
    }
    for (std::size_t m = 1; m < nodes_.size(); ++m) {
        if (!(nodes_[m] > nodes_[m - 1])) {
            throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
        }
    }
}

TimeGrid TimeGrid::scaled(double factor) const {
    if (!(factor > 0.0)) {
        throw std::invalid_argument("TimeGrid::scaled: factor must be positive");
    }
    std::vector<double> scaled_nodes(nodes_);
    for (double& t : scaled_nodes) {
        t *= factor;
    }
    return TimeGrid(std::move(scaled_nodes));
}

} // namespace pmheat
