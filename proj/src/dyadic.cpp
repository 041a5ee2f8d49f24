#include "fha/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fha {

DyadicTree::DyadicTree(const Space* space, int level_min, int level_max,
                       std::vector<std::vector<Cube>> levels)
    : space_(space), level_min_(level_min), level_max_(level_max), levels_(std::move(levels)) {
    measure_constants();
}

const std::vector<Cube>& DyadicTree::cubes_at_level(int nu) const {
    if (nu < level_min_ || nu > level_max_)
        throw std::out_of_range("level " + std::to_string(nu) + " outside tree range [" +
                                std::to_string(level_min_) + "," + std::to_string(level_max_) + "]");
    return levels_[nu - level_min_];
}

const Cube& DyadicTree::parent_of(const Cube& q) const {
    if (q.parent < 0) throw std::out_of_range("cube has no parent");
    return levels_[q.level - 1 - level_min_][q.parent];
}

double DyadicTree::cube_measure(const Cube& q) const {
    double m = 0.0;
    for (int x : q.members) m += space_->mu(x);
    return m;
}

bool DyadicTree::is_descendant(const Cube& q, const Cube& a) const {
    if (q.level < a.level) return false;
    const Cube* cur = &q;
    while (cur->level > a.level) cur = &parent_of(*cur);
    return cur->id == a.id;
}

void DyadicTree::measure_constants() {
    kappa0_ = 0.0;
    a0_achieved_ = std::numeric_limits<double>::infinity();
    const int n = space_->size();
    for (const auto& fam : levels_) {
        for (const Cube& q : fam) {
            const double scale = q.sidelength();
            double diam = 0.0;
            for (int a : q.members)
                for (int b : q.members) diam = std::max(diam, space_->d(a, b));
            kappa0_ = std::max(kappa0_, diam / scale);
            if (static_cast<int>(q.members.size()) == n) continue; // whole space: no outer point
            double dout = std::numeric_limits<double>::infinity();
            std::vector<char> in(n, 0);
            for (int a : q.members) in[a] = 1;
            for (int y = 0; y < n; ++y)
                if (!in[y]) dout = std::min(dout, space_->d(q.center, y));
            a0_achieved_ = std::min(a0_achieved_, dout / scale);
        }
    }
    if (!std::isfinite(a0_achieved_)) a0_achieved_ = 1.0; // single-point space
    if (kappa0_ == 0.0) kappa0_ = 1.0;                    // all cubes singletons
}

nlohmann::json DyadicTree::to_json() const {
    nlohmann::json cubes = nlohmann::json::array();
    for (const auto& fam : levels_)
        for (const Cube& q : fam)
            cubes.push_back({{"level", q.level},
                             {"id", q.id},
                             {"center", q.center},
                             {"members", q.members},
                             {"parent", q.parent}});
    return {{"level_min", level_min_},
            {"level_max", level_max_},
            {"kappa0", kappa0_},
            {"a0_achieved", a0_achieved_},
            {"cubes", cubes}};
}

DyadicTree christ_decomposition(const Space& s, int level_min, int level_max) {
    if (level_min > level_max) throw std::invalid_argument("level_min must be <= level_max");
    if (std::exp2(-level_min) < s.diameter())
        throw std::invalid_argument("2^{-level_min} must cover the diameter");
    const int n = s.size();
    const int nlev = level_max - level_min + 1;

    // Nested maximal separated nets, coarse to fine, greedy lowest index.
    std::vector<std::vector<int>> nets(nlev);
    std::vector<int> prev;
    for (int k = level_min; k <= level_max; ++k) {
        const double sep = std::exp2(-k);
        std::vector<int>& net = nets[k - level_min];
        net = prev;
        for (int p = 0; p < n; ++p) {
            bool ok = true;
            for (int c : net)
                if (s.d(p, c) < sep) {
                    ok = false;
                    break;
                }
            if (ok) net.push_back(p);
        }
        prev = net;
    }

    std::vector<std::vector<Cube>> levels(nlev);

    auto nearest_center = [&s](const std::vector<int>& net, int p) {
        int best = net[0];
        double bd = s.d(p, net[0]);
        for (int c : net) {
            double dc = s.d(p, c);
            if (dc < bd || (dc == bd && c < best)) {
                bd = dc;
                best = c;
            }
        }
        return best;
    };

    // Finest level: points to nearest net center.
    {
        const auto& net = nets[nlev - 1];
        std::vector<Cube>& fam = levels[nlev - 1];
        fam.resize(net.size());
        for (size_t i = 0; i < net.size(); ++i) {
            fam[i].level = level_max;
            fam[i].id = static_cast<int>(i);
            fam[i].center = net[i];
        }
        for (int p = 0; p < n; ++p) {
            int c = nearest_center(net, p);
            int idx = static_cast<int>(std::find(net.begin(), net.end(), c) - net.begin());
            fam[idx].members.push_back(p);
        }
    }

    // Coarser levels: attach each child cube whole to the net center nearest
    // its own center; members are unions of children, so nesting is exact.
    for (int k = level_max - 1; k >= level_min; --k) {
        const auto& net = nets[k - level_min];
        std::vector<Cube>& fam = levels[k - level_min];
        std::vector<Cube>& kids = levels[k + 1 - level_min];
        fam.resize(net.size());
        for (size_t i = 0; i < net.size(); ++i) {
            fam[i].level = k;
            fam[i].id = static_cast<int>(i);
            fam[i].center = net[i];
        }
        for (Cube& child : kids) {
            int c = nearest_center(net, child.center);
            int idx = static_cast<int>(std::find(net.begin(), net.end(), c) - net.begin());
            child.parent = idx;
            fam[idx].children.push_back(child.id);
            fam[idx].members.insert(fam[idx].members.end(), child.members.begin(),
                                    child.members.end());
        }
        for (Cube& q : fam) std::sort(q.members.begin(), q.members.end());
        // nested nets guarantee every center keeps its own chain, so no cube is empty
    }

    return DyadicTree(&s, level_min, level_max, std::move(levels));
}

} // namespace fha
