#include "peertrade/ingestion.hpp"

#include "peertrade/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

namespace peertrade {

const char* to_string(Season season) {
    return season == Season::Summer ? "summer" : "winter";
}

Season parse_season(const std::string& text) {
    if (text == "summer") {
        return Season::Summer;
    }
    if (text == "winter") {
        return Season::Winter;
    }
    throw ValidationError("season must be 'summer' or 'winter', got '" + text + "'");
}

void ScenarioConfig::validate() const {
    if (prosumers <= 0) {
        throw ValidationError("scenario config: prosumers must be positive");
    }
    if (intervals <= 0) {
        throw ValidationError("scenario config: intervals must be positive");
    }
    if (interval_minutes <= 0) {
        throw ValidationError("scenario config: interval_minutes must be positive");
    }
    if (!std::isfinite(capacity_kwp) || capacity_kwp < 0.0) {
        throw ValidationError("scenario config: capacity_kwp must be finite and >= 0");
    }
}

namespace {

std::string location(const std::filesystem::path& path, std::size_t line) {
    std::ostringstream out;
    out << path.string() << ":" << line;
    return out.str();
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double_field(const std::filesystem::path& path, std::size_t line,
                          const char* column, std::string_view text) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        std::ostringstream msg;
        msg << location(path, line) << ": column '" << column << "': cannot parse '" << text
            << "' as a number";
        throw ValidationError(msg.str());
    }
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << location(path, line) << ": column '" << column << "': value '" << text
            << "' is not finite";
        throw ValidationError(msg.str());
    }
    if (value < 0.0) {
        std::ostringstream msg;
        msg << location(path, line) << ": column '" << column << "': negative value " << value;
        throw ValidationError(msg.str());
    }
    return value;
}

std::uint64_t parse_index_field(const std::filesystem::path& path, std::size_t line,
                                const char* column, std::string_view text) {
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        std::ostringstream msg;
        msg << location(path, line) << ": column '" << column << "': cannot parse '" << text
            << "' as a non-negative integer";
        throw ValidationError(msg.str());
    }
    return value;
}

} // namespace

std::vector<EnergyProfile> load_profiles(const std::filesystem::path& path, int interval_minutes) {
    std::ifstream input(path);
    if (!input) {
        throw ValidationError("cannot open scenario file: " + path.string());
    }

    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(input, line)) {
        throw ValidationError(path.string() + ": empty file, no prosumers");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kScenarioCsvHeader) {
        std::ostringstream msg;
        msg << location(path, line_no) << ": expected header '" << kScenarioCsvHeader << "', got '"
            << line << "'";
        throw ValidationError(msg.str());
    }

    struct Cell {
        std::size_t source_line;
        IntervalReading reading;
    };
    // prosumer id -> interval index -> reading; ordered for stable output
    std::map<std::uint64_t, std::map<std::uint64_t, Cell>> table;
    std::uint64_t max_interval = 0;

    while (std::getline(input, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 4) {
            std::ostringstream msg;
            msg << location(path, line_no) << ": expected 4 comma-separated fields, got "
                << fields.size();
            throw ValidationError(msg.str());
        }
        const std::uint64_t interval = parse_index_field(path, line_no, "interval", fields[0]);
        const std::uint64_t prosumer = parse_index_field(path, line_no, "prosumer_id", fields[1]);
        if (prosumer > std::numeric_limits<std::uint32_t>::max()) {
            std::ostringstream msg;
            msg << location(path, line_no) << ": column 'prosumer_id': id " << prosumer
                << " out of range";
            throw ValidationError(msg.str());
        }
        IntervalReading reading;
        reading.generation_kwh = parse_double_field(path, line_no, "generation_kwh", fields[2]);
        reading.demand_kwh = parse_double_field(path, line_no, "demand_kwh", fields[3]);

        const auto [it, inserted] = table[prosumer].try_emplace(interval, Cell{line_no, reading});
        if (!inserted) {
            std::ostringstream msg;
            msg << location(path, line_no) << ": duplicate reading for prosumer " << prosumer
                << " at interval " << interval << " (first seen at line " << it->second.source_line
                << ")";
            throw ValidationError(msg.str());
        }
        max_interval = std::max(max_interval, interval);
    }

    if (table.empty()) {
        throw ValidationError(path.string() + ": no prosumers");
    }

    const std::uint64_t horizon = max_interval + 1;
    std::vector<EnergyProfile> profiles;
    profiles.reserve(table.size());
    for (const auto& [prosumer, cells] : table) {
        EnergyProfile profile;
        profile.prosumer = ProsumerId{static_cast<std::uint32_t>(prosumer)};
        profile.interval_minutes = interval_minutes;
        profile.intervals.resize(horizon);
        if (cells.size() != horizon) {
            for (std::uint64_t t = 0; t < horizon; ++t) {
                if (!cells.contains(t)) {
                    std::ostringstream msg;
                    msg << path.string() << ": prosumer " << prosumer << " is missing interval "
                        << t << " (misaligned scenario, horizon " << horizon << ")";
                    throw ValidationError(msg.str());
                }
            }
        }
        for (const auto& [interval, cell] : cells) {
            profile.intervals[interval] = cell.reading;
        }
        profiles.push_back(std::move(profile));
    }

    validate_profiles(profiles);
    return profiles;
}

void write_profiles(const std::filesystem::path& path, const std::vector<EnergyProfile>& profiles) {
    validate_profiles(profiles);
    std::ofstream out(path, std::ios::binary); // LF line endings on every platform
    if (!out) {
        throw ValidationError("cannot open file for writing: " + path.string());
    }
    out << kScenarioCsvHeader << "\n";
    const std::size_t horizon = profiles.empty() ? 0 : profiles.front().intervals.size();
    for (std::size_t t = 0; t < horizon; ++t) {
        for (const auto& profile : profiles) {
            const auto& reading = profile.intervals[t];
            out << t << ',' << profile.prosumer.value << ',' << format_double(reading.generation_kwh)
                << ',' << format_double(reading.demand_kwh) << "\n";
        }
    }
    if (!out.flush()) {
        throw ValidationError("failed writing scenario file: " + path.string());
    }
}

namespace {

// Deterministic stream of doubles; one independent stream per prosumer.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    double next(double lo, double hi) {
        const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * unit;
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over (seed, stream)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct SeasonShape {
    double sunrise_h;
    double sunset_h;
    double irradiance; // relative to peak panel output
    double morning_kw;
    double evening_kw;
    double midday_kw_max; // daytime occupancy / air conditioning, per household
};

SeasonShape shape_for(Season season) {
    if (season == Season::Summer) {
        return {5.0, 19.5, 1.0, 0.8, 1.3, 2.2};
    }
    return {6.75, 17.25, 0.6, 1.0, 1.8, 1.2};
}

double bell(double x, double center, double width) {
    const double z = (x - center) / width;
    return std::exp(-0.5 * z * z);
}

double round_nano(double kwh) {
    return std::round(kwh * 1e9) / 1e9;
}

} // namespace

std::vector<EnergyProfile> generate_synthetic(const ScenarioConfig& config) {
    config.validate();

    const SeasonShape shape = shape_for(config.season);
    const double interval_hours = config.interval_minutes / 60.0;
    const double solar_noon = 0.5 * (shape.sunrise_h + shape.sunset_h);
    const double solar_width = (shape.sunset_h - shape.sunrise_h) / 6.0;
    const double peak_kwh = config.capacity_kwp * interval_hours * shape.irradiance;
    const double base_kw = 0.2;

    std::vector<EnergyProfile> profiles;
    profiles.reserve(static_cast<std::size_t>(config.prosumers));
    for (int n = 0; n < config.prosumers; ++n) {
        UniformStream rng(mix_seed(config.seed, static_cast<std::uint64_t>(n)));
        const double orientation = rng.next(0.75, 1.0);
        // Roof azimuth shifts the production bell: east roofs peak before
        // solar noon, west roofs after.
        const double azimuth_shift_h = rng.next(-2.5, 2.5);
        const double household = rng.next(0.7, 1.5);
        const double midday_kw = rng.next(0.0, shape.midday_kw_max);
        const double morning_peak_h = rng.next(6.3, 7.7);
        const double evening_peak_h = rng.next(18.2, 19.8);

        EnergyProfile profile;
        profile.prosumer = ProsumerId{static_cast<std::uint32_t>(n)};
        profile.interval_minutes = config.interval_minutes;
        profile.intervals.reserve(static_cast<std::size_t>(config.intervals));

        for (int t = 0; t < config.intervals; ++t) {
            const double hour = std::fmod((t + 0.5) * interval_hours, 24.0);
            const double cloud = rng.next(0.65, 1.0);
            const double noise = rng.next(0.85, 1.15);

            double generation = 0.0;
            if (hour > shape.sunrise_h && hour < shape.sunset_h) {
                generation = peak_kwh * orientation * cloud *
                             bell(hour, solar_noon + azimuth_shift_h, solar_width);
            }

            const double demand_kw = base_kw + shape.morning_kw * bell(hour, morning_peak_h, 1.2) +
                                     shape.evening_kw * bell(hour, evening_peak_h, 1.8) +
                                     midday_kw * bell(hour, 13.5, 2.2);
            const double demand = household * demand_kw * interval_hours * noise;

            profile.intervals.push_back({round_nano(generation), round_nano(demand)});
        }
        profiles.push_back(std::move(profile));
    }

    validate_profiles(profiles);
    return profiles;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    std::ifstream input(path);
    if (!input) {
        throw ValidationError("cannot open scenario config: " + path.string());
    }

    ScenarioConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << location(path, line_no) << ": expected key=value, got '" << line << "'";
            throw ValidationError(msg.str());
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) {
            key.pop_back();
        }
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) {
            value.erase(value.begin());
        }

        try {
            if (key == "prosumers") {
                config.prosumers = std::stoi(value);
            } else if (key == "intervals") {
                config.intervals = std::stoi(value);
            } else if (key == "interval_minutes") {
                config.interval_minutes = std::stoi(value);
            } else if (key == "capacity_kwp") {
                config.capacity_kwp = std::stod(value);
            } else if (key == "season") {
                config.season = parse_season(value);
            } else if (key == "seed") {
                config.seed = std::stoull(value);
            } else {
                std::ostringstream msg;
                msg << location(path, line_no) << ": unknown key '" << key << "'";
                throw ValidationError(msg.str());
            }
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception&) {
            std::ostringstream msg;
            msg << location(path, line_no) << ": cannot parse value '" << value << "' for key '"
                << key << "'";
            throw ValidationError(msg.str());
        }
    }

    config.validate();
    return config;
}

} // namespace peertrade
