#include "acdetect/proposals.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "acdetect/image_io.hpp"

namespace acd {

namespace {

struct CellsHash {
    size_t operator()(const std::vector<Cell>& cells) const {
        // FNV-1a over the coordinate stream
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        for (const Cell& c : cells) {
            mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.u)));
            mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.v)));
        }
        return static_cast<size_t>(h);
    }
};

using CellSetIndex = std::unordered_set<std::vector<Cell>, CellsHash>;

// Appends the region if it passes the size filters and is new; returns the
// running id counter.
void try_add_region(std::vector<Region>& regions, CellSetIndex& seen, RegionSource source,
                    std::vector<Cell> cells, std::int64_t pixel_area, int min_cells,
                    double area_cap) {
    if (static_cast<int>(cells.size()) < min_cells) return;
    if (static_cast<double>(pixel_area) > area_cap) return;
    if (!seen.insert(cells).second) return;
    Region region;
    region.id = static_cast<int>(regions.size());
    region.source = source;
    region.cells = std::move(cells);
    region.pixel_area = pixel_area;
    regions.push_back(std::move(region));
}

} // namespace

std::string_view to_string(PolarityMode mode) {
    switch (mode) {
        case PolarityMode::Upper: return "upper";
        case PolarityMode::Lower: return "lower";
        case PolarityMode::Both: return "both";
    }
    return "unknown";
}

PolarityMode polarity_mode_from_string(std::string_view name) {
    if (name == "upper") return PolarityMode::Upper;
    if (name == "lower") return PolarityMode::Lower;
    if (name == "both") return PolarityMode::Both;
    throw ConfigError("unknown polarity mode: " + std::string(name));
}

void ProposalConfig::validate() const {
    if (n_levels < 2) throw ConfigError("n_levels must be >= 2");
    if (min_cells < 1) throw ConfigError("min_cells must be >= 1");
    if (!(max_area_frac > 0.0 && max_area_frac <= 1.0))
        throw ConfigError("max_area_frac must be in (0, 1]");
    if (connectivity != Connectivity::Four && connectivity != Connectivity::Eight)
        throw ConfigError("connectivity must be 4 or 8");
}

std::vector<std::vector<std::int64_t>> level_set_components(const ImageGray& image, double level,
                                                            Polarity polarity,
                                                            Connectivity connectivity) {
    const int w = image.width;
    const int h = image.height;
    const std::int64_t total = image.pixel_count();
    std::vector<std::uint8_t> member(static_cast<size_t>(total));
    if (polarity == Polarity::Upper) {
        for (std::int64_t i = 0; i < total; ++i) member[i] = image.values[i] >= level;
    } else {
        for (std::int64_t i = 0; i < total; ++i) member[i] = image.values[i] <= level;
    }

    std::vector<std::uint8_t> visited(static_cast<size_t>(total), 0);
    std::vector<std::vector<std::int64_t>> components;
    std::vector<std::int64_t> stack;

    const bool diag = connectivity == Connectivity::Eight;
    for (std::int64_t seed = 0; seed < total; ++seed) {
        if (!member[seed] || visited[seed]) continue;
        std::vector<std::int64_t> comp;
        visited[seed] = 1;
        stack.assign(1, seed);
        while (!stack.empty()) {
            const std::int64_t idx = stack.back();
            stack.pop_back();
            comp.push_back(idx);
            const int x = static_cast<int>(idx % w);
            const int y = static_cast<int>(idx / w);
            auto visit = [&](int nx, int ny) {
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) return;
                const std::int64_t ni = static_cast<std::int64_t>(ny) * w + nx;
                if (member[ni] && !visited[ni]) {
                    visited[ni] = 1;
                    stack.push_back(ni);
                }
            };
            visit(x - 1, y);
            visit(x + 1, y);
            visit(x, y - 1);
            visit(x, y + 1);
            if (diag) {
                visit(x - 1, y - 1);
                visit(x + 1, y - 1);
                visit(x - 1, y + 1);
                visit(x + 1, y + 1);
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

std::vector<Cell> rasterize_region(std::span<const std::int64_t> pixel_set,
                                   const HeatmapGeometry& geom) {
    const int w = geom.image_width;
    const std::int64_t total = static_cast<std::int64_t>(w) * geom.image_height;
    const int half = geom.patch_size / 2;
    std::vector<Cell> cells;
    for (std::int64_t idx : pixel_set) {
        if (idx < 0 || idx >= total) throw DomainError("pixel index outside image");
        const int x = static_cast<int>(idx % w);
        const int y = static_cast<int>(idx / w);
        const int dx = x - half;
        const int dy = y - half;
        if (dx < 0 || dy < 0 || dx % geom.stride != 0 || dy % geom.stride != 0) continue;
        const int u = dx / geom.stride;
        const int v = dy / geom.stride;
        if (u < geom.hm_width && v < geom.hm_height) cells.push_back(Cell{u, v});
    }
    // input was sorted row-major and each cell has a unique center pixel
    return cells;
}

RegionProposalSet collect_proposals(const ImageGray& image, const HeatmapGeometry& geom,
                                    const ProposalConfig& cfg,
                                    std::span<const std::vector<std::int64_t>> external) {
    cfg.validate();
    const double area_cap = cfg.max_area_frac * static_cast<double>(image.pixel_count());

    // Evenly spaced quantiles of the image values (nearest rank), endpoints
    // included; duplicates collapse so each threshold is segmented once.
    std::vector<double> sorted(image.values);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> thresholds;
    thresholds.reserve(cfg.n_levels);
    for (int i = 0; i < cfg.n_levels; ++i) {
        const double f = static_cast<double>(i) / (cfg.n_levels - 1);
        const auto rank = static_cast<size_t>(std::llround(f * (sorted.size() - 1)));
        thresholds.push_back(sorted[rank]);
    }
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    std::vector<Region> regions;
    CellSetIndex seen;

    auto scan_polarity = [&](double level, Polarity pol) {
        const RegionSource source =
            pol == Polarity::Upper ? RegionSource::LevelSetUpper : RegionSource::LevelSetLower;
        for (auto& comp : level_set_components(image, level, pol, cfg.connectivity)) {
            if (static_cast<int>(comp.size()) < cfg.min_cells) continue; // |cells| <= |pixels|
            try_add_region(regions, seen, source, rasterize_region(comp, geom),
                           static_cast<std::int64_t>(comp.size()), cfg.min_cells, area_cap);
        }
    };

    for (double level : thresholds) {
        if (cfg.polarity != PolarityMode::Lower) scan_polarity(level, Polarity::Upper);
        if (cfg.polarity != PolarityMode::Upper) scan_polarity(level, Polarity::Lower);
    }
    for (const auto& pixel_set : external) {
        try_add_region(regions, seen, RegionSource::External, rasterize_region(pixel_set, geom),
                       static_cast<std::int64_t>(pixel_set.size()), cfg.min_cells, area_cap);
    }

    RegionProposalSet set;
    set.candidate_count = static_cast<std::int64_t>(regions.size());
    set.regions = std::move(regions);
    return set;
}

std::vector<std::vector<std::int64_t>> load_external_proposals(const std::string& path,
                                                               int expect_width,
                                                               int expect_height) {
    LabelMap map = read_label_pgm(path);
    if (map.width != expect_width || map.height != expect_height)
        throw ShapeError("label map dimensions do not match the image");

    std::uint16_t max_label = 0;
    for (std::uint16_t v : map.labels) max_label = std::max(max_label, v);
    std::vector<std::vector<std::int64_t>> sets(max_label);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(map.labels.size()); ++i) {
        if (map.labels[i] != 0) sets[map.labels[i] - 1].push_back(i);
    }
    // drop label values that never occur
    std::erase_if(sets, [](const auto& s) { return s.empty(); });
    return sets;
}

RegionProposalSet grid_proposals(const HeatmapGeometry& geom, std::span<const GridSpec> specs) {
    std::vector<Region> regions;
    CellSetIndex seen;
    for (const GridSpec& spec : specs) {
        if (spec.block <= 0 || spec.step <= 0) throw ConfigError("grid block and step must be positive");
        if (spec.block > geom.hm_width || spec.block > geom.hm_height) continue;
        // pixel footprint of a block of cells: union of its patch rectangles
        const std::int64_t side = static_cast<std::int64_t>(spec.block - 1) * geom.stride +
                                  geom.patch_size;
        const std::int64_t area = side * side;
        for (int v0 = 0; v0 + spec.block <= geom.hm_height; v0 += spec.step) {
            for (int u0 = 0; u0 + spec.block <= geom.hm_width; u0 += spec.step) {
                std::vector<Cell> cells;
                cells.reserve(static_cast<size_t>(spec.block) * spec.block);
                for (int v = v0; v < v0 + spec.block; ++v)
                    for (int u = u0; u < u0 + spec.block; ++u) cells.push_back(Cell{u, v});
                if (!seen.insert(cells).second) continue;
                Region region;
                region.id = static_cast<int>(regions.size());
                region.source = RegionSource::Synthetic;
                region.cells = std::move(cells);
                region.pixel_area = area;
                regions.push_back(std::move(region));
            }
        }
    }
    RegionProposalSet set;
    set.candidate_count = static_cast<std::int64_t>(regions.size());
    set.regions = std::move(regions);
    return set;
}

RegionProposalSet merge_proposal_sets(const RegionProposalSet& a, const RegionProposalSet& b) {
    RegionProposalSet out;
    CellSetIndex seen;
    for (const auto* src : {&a, &b}) {
        for (const Region& region : src->regions) {
            if (!seen.insert(region.cells).second) continue;
            Region copy = region;
            copy.id = static_cast<int>(out.regions.size());
            out.regions.push_back(std::move(copy));
        }
    }
    out.candidate_count = static_cast<std::int64_t>(out.regions.size());
    return out;
}

} // namespace acd
