#pragma once

// Vault construction: genuine set, chaff generation (random or hexagonal
// lattice), locking and two-finger secret splitting.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "quiz.hpp"
#include "random.hpp"
#include "secret.hpp"

namespace fvault {

enum class GridKind { random, hex };

inline std::string_view to_string(GridKind g) { return g == GridKind::hex ? "hex" : "random"; }

inline GridKind parse_grid_kind(std::string_view s) {
    if (s == "random") return GridKind::random;
    if (s == "hex") return GridKind::hex;
    throw ParameterError("unknown grid kind '" + std::string(s) + "' (expected random or hex)");
}

// Attacker-visible vault point. No genuine/chaff flag by construction.
struct VaultRecord {
    int x = 0;
    int y = 0;
    Element value;
    std::optional<double> beta;

    Pixel pixel() const { return {x, y}; }

    friend bool operator==(const VaultRecord&, const VaultRecord&) = default;
};

struct Vault {
    std::uint32_t q = Field::default_modulus;
    std::size_t k = 0;
    int d = 11;
    std::uint32_t quiz_n = 0;
    GridKind grid = GridKind::random;
    Frame frame;
    std::vector<VaultRecord> records;

    Field field() const { return Field(q); }
    std::size_t size() const { return records.size(); }

    std::optional<QuizParams> quiz() const {
        if (quiz_n == 0) return std::nullopt;
        return QuizParams::make(field(), quiz_n);
    }

    Element abscissa(const VaultRecord& rec) const {
        return {static_cast<std::uint32_t>(concat(rec.pixel(), frame.height))};
    }

    friend bool operator==(const Vault&, const Vault&) = default;
};

// Experiment-only sidecar; never consumed by unlock or attack.
struct GroundTruth {
    Secret secret;
    Polynomial f;
    std::vector<std::size_t> genuine_indices;
    std::size_t t = 0;
    Template enrollment;
    std::uint64_t seed = 0;
};

struct LockParams {
    std::uint32_t q = Field::default_modulus;
    std::size_t k = 0;
    std::size_t t = 0;
    std::size_t r = 0;  // ignored for hex grids: r is the lattice site count
    int d = 11;
    bool crc = false;
    GridKind grid = GridKind::random;
    std::uint32_t quiz_n = 0;
};

// Hexagonal packing ceiling on the number of points at mutual distance d.
inline double packing_ceiling(const Frame& frame, int d) {
    return 2.0 / std::sqrt(3.0) * frame.width * frame.height / (static_cast<double>(d) * d);
}

inline Element pixel_abscissa(Pixel p, const Frame& frame) {
    return {static_cast<std::uint32_t>(concat(p, frame.height))};
}

// Uniform draw from F_q minus a small excluded set.
inline Element draw_excluding(const Field& field, std::vector<Element> excluded, Rng& rng) {
    std::sort(excluded.begin(), excluded.end());
    excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
    std::uniform_int_distribution<std::uint32_t> dist(0, field.modulus() - 1 - static_cast<std::uint32_t>(excluded.size()));
    std::uint32_t v = dist(rng);
    for (Element e : excluded)
        if (v >= e.value) ++v;
    return {v};
}

inline VaultRecord make_chaff_record(const Field& field, Pixel p, const Frame& frame, const Polynomial& f,
                                     const std::optional<QuizParams>& quiz, Rng& rng) {
    const Element on_graph = evaluate(field, f, pixel_abscissa(p, frame));
    VaultRecord rec{p.x, p.y, {}, std::nullopt};
    if (quiz) {
        rec.value = draw_excluding(field, quiz_preimages(field, *quiz, on_graph), rng);
        rec.beta = quiz_random_beta(*quiz, rng);
    } else {
        rec.value = draw_excluding(field, {on_graph}, rng);
    }
    return rec;
}

struct GenuineSet {
    std::vector<VaultRecord> records;
    std::vector<Minutia> locking;
};

inline GenuineSet make_genuine_set(const Field& field, const Template& tpl, std::size_t t, const Polynomial& f,
                                   std::uint64_t seed) {
    if (t > tpl.minutiae.size())
        throw ParameterError("t=" + std::to_string(t) + " exceeds the " + std::to_string(tpl.minutiae.size()) +
                             " template minutiae");
    Rng rng = seeded_rng(seed);
    std::vector<std::size_t> order(tpl.minutiae.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    GenuineSet out;
    for (std::size_t i = 0; i < t; ++i) {
        const Minutia& m = tpl.minutiae[order[i]];
        out.locking.push_back(m);
        out.records.push_back({m.x, m.y, evaluate(field, f, pixel_abscissa(m.pixel(), tpl.frame)), std::nullopt});
    }
    return out;
}

// Bucket grid with cell size d for minimum-distance queries.
class SpacingIndex {
public:
    SpacingIndex(const Frame& frame, double d)
        : d_(d), cell_(std::max(1.0, d)),
          cols_(static_cast<int>(frame.width / cell_) + 1),
          rows_(static_cast<int>(frame.height / cell_) + 1),
          buckets_(static_cast<std::size_t>(cols_) * rows_) {}

    bool admissible(Pixel p) const {
        const int cx = cell_x(p), cy = cell_y(p);
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int x = cx + dx, y = cy + dy;
                if (x < 0 || y < 0 || x >= cols_ || y >= rows_) continue;
                for (Pixel q : buckets_[static_cast<std::size_t>(y) * cols_ + x])
                    if (distance(p, q) < d_) return false;
            }
        return true;
    }

    void insert(Pixel p) { buckets_[static_cast<std::size_t>(cell_y(p)) * cols_ + cell_x(p)].push_back(p); }

private:
    int cell_x(Pixel p) const { return std::clamp(static_cast<int>(p.x / cell_), 0, cols_ - 1); }
    int cell_y(Pixel p) const { return std::clamp(static_cast<int>(p.y / cell_), 0, rows_ - 1); }

    double d_;
    double cell_;
    int cols_;
    int rows_;
    std::vector<std::vector<Pixel>> buckets_;
};

inline constexpr std::size_t chaff_retry_budget = 10000;

// Rejection-sampled uniform chaff filling the vault up to r points.
inline std::vector<VaultRecord> gen_chaff_random(const Field& field, std::span<const Pixel> existing, std::size_t r,
                                                 int d, const Frame& frame, const Polynomial& f, std::uint64_t seed,
                                                 const std::optional<QuizParams>& quiz = std::nullopt) {
    if (r < existing.size()) throw ParameterError("vault size r smaller than the genuine set");
    SpacingIndex index(frame, d);
    for (Pixel p : existing) index.insert(p);
    Rng rng = seeded_rng(seed);
    std::uniform_int_distribution<int> px(0, frame.width - 1);
    std::uniform_int_distribution<int> py(0, frame.height - 1);
    const std::size_t wanted = r - existing.size();
    std::vector<VaultRecord> chaff;
    chaff.reserve(wanted);
    while (chaff.size() < wanted) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < chaff_retry_budget; ++attempt) {
            const Pixel p{px(rng), py(rng)};
            if (!index.admissible(p)) continue;
            index.insert(p);
            chaff.push_back(make_chaff_record(field, p, frame, f, quiz, rng));
            placed = true;
            break;
        }
        if (!placed)
            throw PlacementError("chaff placement saturated after " + std::to_string(existing.size() + chaff.size()) +
                                     " of " + std::to_string(r) + " points",
                                 existing.size() + chaff.size(), r);
    }
    return chaff;
}

// Hexagonal lattice with nearest-neighbour spacing d: rows d*sqrt(3)/2
// apart, odd rows shifted by d/2.
class HexLattice {
public:
    struct Site {
        long col = 0;
        long row = 0;
        friend auto operator<=>(const Site&, const Site&) = default;
    };

    HexLattice(double spacing, double origin_x, double origin_y)
        : spacing_(spacing), pitch_(spacing * std::sqrt(3.0) / 2.0), ox_(origin_x), oy_(origin_y) {
        if (!(spacing > 0)) throw ParameterError("lattice spacing must be positive");
    }

    double spacing() const { return spacing_; }
    double pitch() const { return pitch_; }

    std::array<double, 2> position(Site s) const {
        const bool odd = ((s.row % 2) + 2) % 2 == 1;
        return {ox_ + s.col * spacing_ + (odd ? spacing_ / 2 : 0.0), oy_ + s.row * pitch_};
    }

    Site nearest(double x, double y) const {
        const long r0 = std::lround((y - oy_) / pitch_);
        Site best{};
        double best_d2 = std::numeric_limits<double>::infinity();
        for (long row = r0 - 1; row <= r0 + 1; ++row) {
            const bool odd = ((row % 2) + 2) % 2 == 1;
            const long col = std::lround((x - ox_ - (odd ? spacing_ / 2 : 0.0)) / spacing_);
            const auto [sx, sy] = position({col, row});
            const double d2 = (sx - x) * (sx - x) + (sy - y) * (sy - y);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = {col, row};
            }
        }
        return best;
    }

    static Pixel round_to_pixel(std::array<double, 2> p) {
        return {static_cast<int>(std::lround(p[0])), static_cast<int>(std::lround(p[1]))};
    }

    // All sites whose rounded pixel lies inside the frame, row-major.
    std::vector<Site> sites_in(const Frame& frame) const {
        std::vector<Site> out;
        const long row_lo = static_cast<long>(std::floor((-1.0 - oy_) / pitch_));
        const long row_hi = static_cast<long>(std::ceil((frame.height - oy_) / pitch_));
        const long col_lo = static_cast<long>(std::floor((-1.0 - ox_) / spacing_)) - 1;
        const long col_hi = static_cast<long>(std::ceil((frame.width - ox_) / spacing_));
        for (long row = row_lo; row <= row_hi; ++row)
            for (long col = col_lo; col <= col_hi; ++col)
                if (in_frame(round_to_pixel(position({col, row})), frame)) out.push_back({col, row});
        return out;
    }

private:
    double spacing_;
    double pitch_;
    double ox_;
    double oy_;
};

// Lattice with origin jittered uniformly within one cell.
inline HexLattice jittered_lattice(int d, Rng& rng) {
    const double pitch = d * std::sqrt(3.0) / 2.0;
    std::uniform_real_distribution<double> jx(0.0, d);
    std::uniform_real_distribution<double> jy(0.0, pitch);
    const double ox = jx(rng);
    const double oy = jy(rng);
    return HexLattice(d, ox, oy);
}

struct HexVaultParts {
    std::vector<VaultRecord> genuine;  // in locking order, snapped to sites
    std::vector<VaultRecord> chaff;
    double max_displacement = 0.0;  // from minutia to its real-valued site
};

// Every lattice site in the frame becomes a vault point; genuine minutiae
// take their nearest free site.
inline HexVaultParts gen_chaff_hexgrid(const Field& field, std::span<const Minutia> locking, int d, const Frame& frame,
                                       const Polynomial& f, std::uint64_t seed,
                                       const std::optional<QuizParams>& quiz = std::nullopt) {
    Rng rng = seeded_rng(seed);
    const HexLattice lattice = jittered_lattice(d, rng);
    const auto sites = lattice.sites_in(frame);
    if (sites.size() < locking.size())
        throw ParameterError("hex lattice has " + std::to_string(sites.size()) + " sites, fewer than t=" +
                             std::to_string(locking.size()));
    std::map<HexLattice::Site, std::size_t> site_index;
    for (std::size_t i = 0; i < sites.size(); ++i) site_index.emplace(sites[i], i);
    std::vector<bool> taken(sites.size(), false);

    HexVaultParts out;
    for (const Minutia& m : locking) {
        const auto home = lattice.nearest(m.x, m.y);
        std::optional<std::size_t> pick;
        double pick_dist = std::numeric_limits<double>::infinity();
        // Closest free site within two rings; that is the home site when free.
        for (long dr = -2; dr <= 2; ++dr)
            for (long dc = -2; dc <= 2; ++dc) {
                const HexLattice::Site s{home.col + dc, home.row + dr};
                const auto it = site_index.find(s);
                if (it == site_index.end() || taken[it->second]) continue;
                const auto [sx, sy] = lattice.position(s);
                const double dist = std::hypot(sx - m.x, sy - m.y);
                if (dist < pick_dist) {
                    pick_dist = dist;
                    pick = it->second;
                }
            }
        if (!pick || pick_dist > 2.0 * d)
            throw SnappingError("no free lattice site near minutia (" + std::to_string(m.x) + ", " +
                                std::to_string(m.y) + ")");
        taken[*pick] = true;
        out.max_displacement = std::max(out.max_displacement, pick_dist);
        const Pixel p = HexLattice::round_to_pixel(lattice.position(sites[*pick]));
        out.genuine.push_back({p.x, p.y, evaluate(field, f, pixel_abscissa(p, frame)), std::nullopt});
    }
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (taken[i]) continue;
        const Pixel p = HexLattice::round_to_pixel(lattice.position(sites[i]));
        out.chaff.push_back(make_chaff_record(field, p, frame, f, quiz, rng));
    }
    return out;
}

struct LockResult {
    Vault vault;
    GroundTruth truth;
};

inline void validate_lock_params(const LockParams& p, const Template& tpl) {
    const Field field(p.q);
    if (p.k == 0) throw ParameterError("k must be at least 1");
    if (p.t < p.k) throw ParameterError("t must be at least k");
    if (p.d < 1) throw ParameterError("minimum distance d must be at least 1");
    if (tpl.frame.width <= 0 || tpl.frame.height <= 0) throw ParameterError("template frame must be non-empty");
    if (max_concat(tpl.frame) >= field.modulus())
        throw ParameterError("frame " + std::to_string(tpl.frame.width) + "x" + std::to_string(tpl.frame.height) +
                             " does not embed into F_" + std::to_string(p.q));
    if (p.t > tpl.minutiae.size())
        throw ParameterError("t=" + std::to_string(p.t) + " exceeds the " + std::to_string(tpl.minutiae.size()) +
                             " template minutiae");
    if (p.grid == GridKind::random) {
        if (p.r < p.t) throw ParameterError("vault size r must be at least t");
        if (static_cast<double>(p.r) > packing_ceiling(tpl.frame, p.d))
            throw ParameterError("r=" + std::to_string(p.r) + " exceeds the packing ceiling for d=" +
                                 std::to_string(p.d));
    }
    if (p.quiz_n == 1) throw ParameterError("quiz granularity must be 0 (off) or at least 2");
}

inline LockResult lock(const Template& tpl, const Secret& secret, const LockParams& params, std::uint64_t seed) {
    validate_lock_params(params, tpl);
    const Field field(params.q);
    const Polynomial f = encode_secret(field, secret, params.k, params.crc);
    std::optional<QuizParams> quiz;
    if (params.quiz_n != 0) quiz = QuizParams::make(field, params.quiz_n);

    GenuineSet genuine = make_genuine_set(field, tpl, params.t, f, derive_seed(seed, streams::genuine_selection));
    std::vector<VaultRecord> chaff;
    if (params.grid == GridKind::random) {
        const auto locking_pixels = pixels_of(genuine.locking);
        if (min_pairwise_distance(locking_pixels) < params.d)
            throw ParameterError("locking minutiae closer than d=" + std::to_string(params.d));
        chaff = gen_chaff_random(field, locking_pixels, params.r, params.d, tpl.frame, f,
                                 derive_seed(seed, streams::chaff), quiz);
    } else {
        HexVaultParts parts =
            gen_chaff_hexgrid(field, genuine.locking, params.d, tpl.frame, f, derive_seed(seed, streams::lattice), quiz);
        genuine.records = std::move(parts.genuine);
        chaff = std::move(parts.chaff);
    }

    if (quiz) {
        Rng rng = make_rng(seed, streams::quiz);
        std::uniform_int_distribution<std::uint32_t> pick_j(0, quiz->n - 1);
        for (std::size_t i = 0; i < genuine.records.size(); ++i) {
            const QuizEncoding enc =
                quiz_encode(field, *quiz, genuine.locking[i].theta, pick_j(rng), genuine.records[i].value);
            genuine.records[i].value = enc.stored;
            genuine.records[i].beta = enc.beta;
        }
    }

    const std::size_t t = genuine.records.size();
    const std::size_t r = t + chaff.size();
    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng = make_rng(seed, streams::shuffle);
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    LockResult out;
    Vault& v = out.vault;
    v.q = params.q;
    v.k = params.k;
    v.d = params.d;
    v.quiz_n = params.quiz_n;
    v.grid = params.grid;
    v.frame = tpl.frame;
    v.records.reserve(r);
    for (std::size_t pos = 0; pos < r; ++pos) {
        const std::size_t src = order[pos];
        if (src < t) {
            v.records.push_back(genuine.records[src]);
            out.truth.genuine_indices.push_back(pos);
        } else {
            v.records.push_back(chaff[src - t]);
        }
    }
    out.truth.secret = secret;
    out.truth.f = f;
    out.truth.t = t;
    out.truth.enrollment = tpl;
    out.truth.seed = seed;
    return out;
}

// Whether g(X) matches a stored ordinate, allowing any quiz shift j*step.
struct GraphTest {
    Field field;
    std::optional<QuizParams> quiz;

    explicit GraphTest(const Vault& v) : field(v.field()), quiz(v.quiz()) {}

    bool operator()(Element g_at_x, Element stored) const {
        const Element diff = field.sub(g_at_x, stored);
        if (!quiz) return diff.value == 0;
        return diff.value % quiz->step == 0 && diff.value / quiz->step < quiz->n;
    }
};

inline std::size_t count_on_graph(const Vault& v, const Polynomial& g) {
    const GraphTest test(v);
    std::size_t hits = 0;
    for (const auto& rec : v.records)
        if (test(evaluate(test.field, g, v.abscissa(rec)), rec.value)) ++hits;
    return hits;
}

// Two-finger split: share1 uniform, share2 = share1 xor secret.
inline std::pair<Secret, Secret> split_secret_two_fingers(const Secret& secret, std::uint64_t seed) {
    Rng rng = make_rng(seed, streams::share);
    Secret first = Secret::random(secret.bits, rng);
    Secret second = secret;
    for (std::size_t i = 0; i < second.bytes.size(); ++i) second.bytes[i] ^= first.bytes[i];
    return {first, second};
}

inline Secret combine_shares(const Secret& a, const Secret& b) {
    if (a.bits != b.bits || a.bytes.size() != b.bytes.size()) throw ParameterError("share lengths differ");
    Secret out = a;
    for (std::size_t i = 0; i < out.bytes.size(); ++i) out.bytes[i] ^= b.bytes[i];
    return out;
}

struct MultiLockResult {
    LockResult first;
    LockResult second;
};

inline MultiLockResult lock_multi(const Template& first, const Template& second, const Secret& secret,
                                  const LockParams& params, std::uint64_t seed) {
    auto [share1, share2] = split_secret_two_fingers(secret, seed);
    MultiLockResult out;
    out.first = lock(first, share1, params, seed);
    out.second = lock(second, share2, params, derive_seed(seed, streams::second_finger));
    return out;
}

}  // namespace fvault
