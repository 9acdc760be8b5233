#include "primecvp/angle_bank.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "primecvp/errors.hpp"

namespace primecvp {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError("angle bank: bad number '" + s + "'");
    }
    return v;
}

std::vector<std::string> split_words(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string w; ss >> w;) out.push_back(w);
    return out;
}

std::vector<double> parse_row(const std::vector<std::string>& words, const std::string& key,
                              std::size_t expected) {
    if (words.empty() || words.front() != key || words.size() != expected + 1) {
        throw ConfigError("angle bank: malformed '" + key + "' line");
    }
    std::vector<double> out;
    for (std::size_t i = 1; i < words.size(); ++i) out.push_back(parse_double(words[i]));
    return out;
}

}  // namespace

AngleBank make_angle_bank(const PretrainResult& result, const TrainConfig& cfg) {
    return {result.angles, cfg.c, cfg.hash(), cfg.master_seed, result.history};
}

void write_angle_bank(std::ostream& out, const AngleBank& bank) {
    out << "primecvp-angles 1\n";
    out << "p " << bank.angles.depth() << '\n';
    out << "c " << fmt_double(bank.c) << '\n';
    out << "config_hash " << std::hex << bank.config_hash << std::dec << '\n';
    out << "seed " << bank.seed << '\n';
    out << "gamma";
    for (double g : bank.angles.gamma()) out << ' ' << fmt_double(g);
    out << "\nbeta";
    for (double b : bank.angles.beta()) out << ' ' << fmt_double(b);
    out << "\nhistory epoch alpha_best alpha_refine accepted alpha_star\n";
    for (const auto& h : bank.history) {
        out << h.epoch << ' ' << fmt_double(h.best_alpha) << ' ' << fmt_double(h.best_alpha_refine) << ' '
            << (h.accepted ? 1 : 0) << ' ' << fmt_double(h.alpha_star) << '\n';
    }
}

AngleBank read_angle_bank(std::istream& in) {
    std::vector<std::vector<std::string>> lines;
    for (std::string line; std::getline(in, line);) {
        auto words = split_words(line);
        if (!words.empty()) lines.push_back(std::move(words));
    }
    if (lines.size() < 8 || lines[0] != std::vector<std::string>{"primecvp-angles", "1"}) {
        throw ConfigError("angle bank: missing or unsupported header");
    }
    auto scalar = [&](std::size_t idx, const std::string& key) {
        if (lines[idx].size() != 2 || lines[idx][0] != key) {
            throw ConfigError("angle bank: expected '" + key + "' line");
        }
        return lines[idx][1];
    };
    AngleBank bank;
    const int p = std::stoi(scalar(1, "p"));
    if (p < 0) throw ConfigError("angle bank: negative depth");
    bank.c = parse_double(scalar(2, "c"));
    bank.config_hash = std::stoull(scalar(3, "config_hash"), nullptr, 16);
    bank.seed = std::stoull(scalar(4, "seed"));
    auto gamma = parse_row(lines[5], "gamma", static_cast<std::size_t>(p));
    auto beta = parse_row(lines[6], "beta", static_cast<std::size_t>(p));
    bank.angles = AngleSchedule(std::move(gamma), std::move(beta));
    if (lines[7].empty() || lines[7][0] != "history") throw ConfigError("angle bank: missing history");
    for (std::size_t i = 8; i < lines.size(); ++i) {
        const auto& w = lines[i];
        if (w.size() != 5) throw ConfigError("angle bank: malformed history row");
        EpochRecord r;
        r.epoch = std::stoi(w[0]);
        r.best_alpha = parse_double(w[1]);
        r.best_alpha_refine = parse_double(w[2]);
        r.accepted = w[3] == "1";
        r.alpha_star = parse_double(w[4]);
        bank.history.push_back(std::move(r));
    }
    return bank;
}

void save_angle_bank(const std::filesystem::path& path, const AngleBank& bank) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write angle bank " + path.string());
    write_angle_bank(out, bank);
}

AngleBank load_angle_bank(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("angle bank not found: " + path.string());
    return read_angle_bank(in);
}

std::filesystem::path angle_bank_path(const std::filesystem::path& dir, int p) {
    return dir / ("angles_p" + std::to_string(p) + ".txt");
}

}  // namespace primecvp
