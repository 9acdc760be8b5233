#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "primecvp/pretrain.hpp"
#include "primecvp/qaoa.hpp"

namespace primecvp {

/// A persisted fixed-angle schedule plus the provenance needed to tell
/// banks apart and the per-epoch validation history that produced it.
struct AngleBank {
    AngleSchedule angles;
    double c = 1.5;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::vector<EpochRecord> history;  // candidate_alphas are not persisted
};

AngleBank make_angle_bank(const PretrainResult& result, const TrainConfig& cfg);

void write_angle_bank(std::ostream& out, const AngleBank& bank);
AngleBank read_angle_bank(std::istream& in);

void save_angle_bank(const std::filesystem::path& path, const AngleBank& bank);
AngleBank load_angle_bank(const std::filesystem::path& path);

/// Conventional file name for depth p inside a bank directory.
std::filesystem::path angle_bank_path(const std::filesystem::path& dir, int p);

}  // namespace primecvp
