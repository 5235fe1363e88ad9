#pragma once

// CSV/JSON serialization of results and atomic file output.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "discord_scope/discord.hpp"
#include "discord_scope/protocol_sim.hpp"
#include "discord_scope/zerovis.hpp"

namespace dscope {

/// Shortest round-trip decimal form, independent of locale.
std::string format_double(double x);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row();
    CsvTable& add(double x);
    CsvTable& add(long long x);
    CsvTable& add(bool x);
    CsvTable& add(std::string_view text);
    CsvTable& add(const char* text) { return add(std::string_view(text)); }

    std::size_t rows() const { return rows_.size(); }
    /// First line "# manifest=<name>", then header, then rows.
    std::string str(std::string_view manifest_name) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temporary and renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

CsvTable landscape_csv(const Landscape& l);
CsvTable zeroline_csv(const ZeroLine& z);
CsvTable f_curves_csv(const std::vector<FSample>& samples);
CsvTable sweep_csv(const std::vector<SweepPoint>& sweep);

nlohmann::ordered_json to_json(const InterferometerConfig& c);
nlohmann::ordered_json to_json(const QuantifierResult& q, bool with_samples = true);
nlohmann::ordered_json to_json(const DiscordResult& d);
nlohmann::ordered_json to_json(const ShotBatch& b);
nlohmann::ordered_json to_json(const FringeFit& f);
nlohmann::ordered_json zeroline_summary(const ZeroLine& z);

}  // namespace dscope
