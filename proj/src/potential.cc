#include "qscatter/potential.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qscatter/errors.h"

namespace qscatter {

TabulatedPotential::TabulatedPotential(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
        throw ValidationError("potential table needs at least two points");
    }
    for (std::size_t i = 0; i < points_.size(); i++) {
        if (!std::isfinite(points_[i].first) || !std::isfinite(points_[i].second)) {
            throw ValidationError("potential table contains a non-finite value");
        }
        if (i > 0 && !(points_[i].first > points_[i - 1].first)) {
            throw ValidationError("potential table x values must be strictly increasing");
        }
    }
}

TabulatedPotential TabulatedPotential::parse(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<double, double>> pts;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, v;
        if (!(row >> x)) {
            continue;
        }
        if (!(row >> v)) {
            throw ValidationError("potential table line " + std::to_string(line_no) + ": expected two columns");
        }
        pts.emplace_back(x, v);
    }
    return TabulatedPotential(std::move(pts));
}

TabulatedPotential TabulatedPotential::load(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw ValidationError("cannot open potential table '" + path + "'");
    }
    std::stringstream buf;
    buf << f.rdbuf();
    return parse(buf.str());
}

double TabulatedPotential::operator()(double x) const {
    if (points_.empty() || x < points_.front().first || x > points_.back().first) {
        return 0;
    }
    auto it = std::lower_bound(points_.begin(), points_.end(), x, [](const auto &p, double v) { return p.first < v; });
    if (it == points_.begin()) {
        return it->second;
    }
    auto prev = it - 1;
    double t = (x - prev->first) / (it->first - prev->first);
    return prev->second + t * (it->second - prev->second);
}

double TabulatedPotential::x_min() const {
    return points_.empty() ? 0 : points_.front().first;
}

double TabulatedPotential::x_max() const {
    return points_.empty() ? 0 : points_.back().first;
}

std::string potential_kind_name(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::Zero:
            return "zero";
        case PotentialKind::Delta:
            return "delta";
        case PotentialKind::Barrier:
            return "barrier";
        case PotentialKind::Well:
            return "well";
        case PotentialKind::Custom:
            return "custom";
    }
    return "?";
}

PotentialKind parse_potential_kind(const std::string &name) {
    for (auto k : {PotentialKind::Zero, PotentialKind::Delta, PotentialKind::Barrier, PotentialKind::Well, PotentialKind::Custom}) {
        if (potential_kind_name(k) == name) {
            return k;
        }
    }
    if (name == "none" || name == "free") {
        return PotentialKind::Zero;
    }
    throw ValidationError("unknown potential kind '" + name + "'");
}

PotentialShape PotentialShape::zero() {
    return {};
}

PotentialShape PotentialShape::delta(double g, double center) {
    PotentialShape s;
    s.kind = PotentialKind::Delta;
    s.strength = g;
    s.center = center;
    return s;
}

PotentialShape PotentialShape::barrier(double height, double width, double center) {
    PotentialShape s;
    s.kind = PotentialKind::Barrier;
    s.strength = height;
    s.width = width;
    s.center = center;
    return s;
}

PotentialShape PotentialShape::well(double depth, double width, double center) {
    PotentialShape s;
    s.kind = PotentialKind::Well;
    s.strength = depth;
    s.width = width;
    s.center = center;
    return s;
}

PotentialShape PotentialShape::custom(TabulatedPotential table) {
    PotentialShape s;
    s.kind = PotentialKind::Custom;
    s.table = std::move(table);
    return s;
}

double PotentialShape::value(double x) const {
    switch (kind) {
        case PotentialKind::Zero:
        case PotentialKind::Delta:
            return 0;
        case PotentialKind::Barrier:
        case PotentialKind::Well: {
            double lo = center - width / 2;
            double hi = center + width / 2;
            if (x >= lo && x < hi) {
                return kind == PotentialKind::Barrier ? strength : -strength;
            }
            return 0;
        }
        case PotentialKind::Custom:
            return table(x);
    }
    return 0;
}

std::pair<double, double> PotentialShape::support() const {
    switch (kind) {
        case PotentialKind::Zero:
            return {0, 0};
        case PotentialKind::Delta:
            return {center, center};
        case PotentialKind::Barrier:
        case PotentialKind::Well:
            return {center - width / 2, center + width / 2};
        case PotentialKind::Custom:
            return {table.x_min(), table.x_max()};
    }
    return {0, 0};
}

bool PotentialShape::is_symmetric() const {
    switch (kind) {
        case PotentialKind::Zero:
            return true;
        case PotentialKind::Delta:
        case PotentialKind::Barrier:
        case PotentialKind::Well:
            return center == 0;
        case PotentialKind::Custom: {
            auto [lo, hi] = support();
            double span = std::max(std::abs(lo), std::abs(hi));
            double scale = 0;
            for (const auto &p : table.points()) {
                scale = std::max(scale, std::abs(p.second));
            }
            constexpr int kProbes = 257;
            for (int i = 0; i < kProbes; i++) {
                double x = span * i / (kProbes - 1);
                if (std::abs(table(x) - table(-x)) > 1e-12 * std::max(1.0, scale)) {
                    return false;
                }
            }
            return true;
        }
    }
    return false;
}

void PotentialShape::validate() const {
    if (!std::isfinite(strength) || !std::isfinite(center) || !std::isfinite(width)) {
        throw ValidationError("potential parameters must be finite");
    }
    if ((kind == PotentialKind::Barrier || kind == PotentialKind::Well) && !(width > 0)) {
        throw ValidationError(potential_kind_name(kind) + " width must be positive");
    }
    if (kind == PotentialKind::Custom && table.empty()) {
        throw ValidationError("custom potential requires a table");
    }
}

}  // namespace qscatter
