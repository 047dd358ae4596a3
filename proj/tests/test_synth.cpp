#include <doctest.h>

#include <cmath>

#include "acdetect/synth.hpp"

using namespace acd;

TEST_CASE("synth heatmap: p=0 gives all zeros, p=1 all ones") {
    const Heatmap zeros = synth_heatmap(16, 16, 0.0, std::nullopt, 42);
    for (float v : zeros.values) CHECK(v == 0.0f);
    const Heatmap ones = synth_heatmap(16, 16, 1.0, std::nullopt, 42);
    for (float v : ones.values) CHECK(v == 1.0f);
}

TEST_CASE("synth heatmap: popcount close to its binomial expectation") {
    const Heatmap hm = synth_heatmap(64, 64, 0.05, std::nullopt, 2024);
    std::int64_t ones = 0;
    for (float v : hm.values) ones += v > 0.5f;
    const double expect = 0.05 * 4096.0;
    const double sigma = std::sqrt(4096.0 * 0.05 * 0.95);
    CHECK(std::abs(ones - expect) <= 3.0 * sigma);
}

TEST_CASE("synth heatmap: planted block forced to ones with p_fg=1") {
    const PlantSpec plant{5, 7, 12, 12, 1.0};
    const Heatmap hm = synth_heatmap(64, 64, 0.05, plant, 7);
    for (int v = 7; v < 19; ++v)
        for (int u = 5; u < 17; ++u) CHECK(hm.at(u, v) == 1.0f);
}

TEST_CASE("synth heatmap: identical seeds give identical heatmaps") {
    const Heatmap a = synth_heatmap(32, 24, 0.3, PlantSpec{1, 1, 4, 4, 0.9}, 99);
    const Heatmap b = synth_heatmap(32, 24, 0.3, PlantSpec{1, 1, 4, 4, 0.9}, 99);
    const Heatmap c = synth_heatmap(32, 24, 0.3, PlantSpec{1, 1, 4, 4, 0.9}, 100);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
}

TEST_CASE("synth heatmap: bad plant rectangles are rejected") {
    CHECK_THROWS_AS(synth_heatmap(16, 16, 0.1, PlantSpec{10, 10, 8, 8, 1.0}, 1), DomainError);
    CHECK_THROWS_AS(synth_heatmap(16, 16, -0.1, std::nullopt, 1), DomainError);
}

TEST_CASE("synth tamper: identity upsample is rejected") {
    const ImageGray img = textured_image(256, 256, 11);
    CHECK_THROWS_AS(synth_tamper(img, {TamperKind::Upsample, 1.0}, PatchRect{0, 0, 128, 128}),
                    DomainError);
    CHECK_THROWS_AS(synth_tamper(img, {TamperKind::Upsample, 1.5}, PatchRect{0, 0, 32, 128}),
                    DomainError);
    CHECK_THROWS_AS(synth_tamper(img, {TamperKind::Rotate, 0.5}, PatchRect{0, 0, 128, 128}),
                    DomainError);
}

TEST_CASE("synth tamper: changes stay inside the rectangle") {
    const ImageGray img = textured_image(256, 256, 13);
    const PatchRect rect{64, 48, 128, 128};
    const TamperResult result = synth_tamper(img, {TamperKind::Upsample, 1.5}, rect);
    bool changed_inside = false;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const bool inside = x >= rect.x && x < rect.x + rect.width && y >= rect.y &&
                                y < rect.y + rect.height;
            const double delta = std::abs(result.image.at(x, y) - img.at(x, y));
            if (!inside) {
                CHECK(delta == 0.0);
                CHECK(result.ground_truth[static_cast<size_t>(y) * img.width + x] == 0);
            } else {
                changed_inside = changed_inside || delta > 0.0;
                CHECK(result.ground_truth[static_cast<size_t>(y) * img.width + x] == 1);
            }
        }
    }
    CHECK(changed_inside);
}

TEST_CASE("synth tamper: rotation perturbs a non-constant image") {
    const ImageGray img = textured_image(200, 200, 17);
    const PatchRect rect{36, 36, 128, 128};
    const TamperResult result = synth_tamper(img, {TamperKind::Rotate, 5.0}, rect);
    double mean_change = 0.0;
    for (int y = rect.y; y < rect.y + rect.height; ++y)
        for (int x = rect.x; x < rect.x + rect.width; ++x)
            mean_change += std::abs(result.image.at(x, y) - img.at(x, y));
    mean_change /= rect.width * rect.height;
    CHECK(mean_change > 0.0);
}

TEST_CASE("synth images: seeded generators reproduce bit for bit") {
    const ImageGray a = textured_image(128, 96, 23);
    const ImageGray b = textured_image(128, 96, 23);
    CHECK(a.values == b.values);
    const Patch p1 = smooth_noise_patch(31, 1.0);
    const Patch p2 = smooth_noise_patch(31, 1.0);
    CHECK(p1.values == p2.values);
    const Patch u1 = upsampled_noise_patch(37, 1.0, 1.5);
    const Patch u2 = upsampled_noise_patch(37, 1.0, 1.5);
    CHECK(u1.values == u2.values);
}

TEST_CASE("synth images: values stay inside [0,1]") {
    const ImageGray img = textured_image(100, 100, 29);
    img.validate();
    for (double v : upsampled_noise_patch(41, 1.2, 1.5).values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}
