#include "aartilc/scenario_config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

namespace aartilc {

namespace {

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<double, bool, std::string, Array> data;
    std::string raw;  // original token for exact integer parses
};

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("scenario parse error at line " + std::to_string(line) + ": " + what);
    }

    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    char get() {
        const char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }
    bool eof() const { return pos >= text.size(); }

    void skip_ws_and_comments(bool stop_at_newline) {
        while (!eof()) {
            const char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else if (c == '\n') {
                if (stop_at_newline) return;
                get();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                get();
            } else {
                return;
            }
        }
    }

    std::string parse_bare_key() {
        std::string key;
        while (!eof()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
                key.push_back(get());
            } else {
                break;
            }
        }
        if (key.empty()) fail("expected a key");
        return key;
    }

    Value parse_value() {
        skip_ws_and_comments(false);
        const char c = peek();
        if (c == '[') {
            get();
            Array arr;
            skip_ws_and_comments(false);
            if (peek() == ']') {
                get();
                return Value{arr, ""};
            }
            for (;;) {
                arr.push_back(parse_value());
                skip_ws_and_comments(false);
                const char d = peek();
                if (d == ',') {
                    get();
                    skip_ws_and_comments(false);
                    if (peek() == ']') {  // trailing comma
                        get();
                        break;
                    }
                    continue;
                }
                if (d == ']') {
                    get();
                    break;
                }
                fail("expected ',' or ']' in array");
            }
            return Value{std::move(arr), ""};
        }
        if (c == '"') {
            get();
            std::string s;
            while (!eof() && peek() != '"') s.push_back(get());
            if (eof()) fail("unterminated string");
            get();
            return Value{s, s};
        }
        // bare token: number or boolean
        std::string tok;
        while (!eof()) {
            const char d = peek();
            if (std::isspace(static_cast<unsigned char>(d)) || d == ',' || d == ']' || d == '#') break;
            tok.push_back(get());
        }
        if (tok.empty()) fail("expected a value");
        if (tok == "true") return Value{true, tok};
        if (tok == "false") return Value{false, tok};
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) fail("malformed number '" + tok + "'");
            return Value{v, tok};
        } catch (const std::exception&) {
            fail("malformed value '" + tok + "'");
        }
    }
};

using Table = std::map<std::string, Value>;
using Document = std::map<std::string, Table>;

Document parse_document(const std::string& text) {
    Parser p{text};
    Document doc;
    std::string section;
    for (;;) {
        p.skip_ws_and_comments(false);
        if (p.eof()) break;
        if (p.peek() == '[') {
            p.get();
            section = p.parse_bare_key();
            p.skip_ws_and_comments(true);
            if (p.peek() != ']') p.fail("expected ']' after section name");
            p.get();
            doc.try_emplace(section);
            continue;
        }
        const std::string key = p.parse_bare_key();
        p.skip_ws_and_comments(true);
        if (p.peek() != '=') p.fail("expected '=' after key '" + key + "'");
        p.get();
        if (section.empty()) p.fail("key '" + key + "' outside any section");
        if (!doc[section].emplace(key, p.parse_value()).second)
            p.fail("duplicate key '" + section + "." + key + "'");
    }
    return doc;
}

// Typed, consumption-tracked view of one section.
class Section {
  public:
    Section(const Document& doc, std::string name, bool required = true) : name_(std::move(name)) {
        const auto it = doc.find(name_);
        if (it == doc.end()) {
            if (required) throw ConfigError("missing [" + name_ + "] section");
        } else {
            table_ = &it->second;
        }
    }

    bool present() const { return table_ != nullptr; }

    const Value* find(const std::string& key) {
        if (!table_) return nullptr;
        const auto it = table_->find(key);
        if (it == table_->end()) return nullptr;
        consumed_.insert(key);
        return &it->second;
    }

    double number(const std::string& key, double fallback) {
        const Value* v = find(key);
        return v ? as_number(*v, key) : fallback;
    }
    bool boolean(const std::string& key, bool fallback) {
        const Value* v = find(key);
        if (!v) return fallback;
        if (const bool* b = std::get_if<bool>(&v->data)) return *b;
        throw ConfigError(qualified(key) + " must be a boolean");
    }
    int integer(const std::string& key, int fallback) {
        const Value* v = find(key);
        if (!v) return fallback;
        const double d = as_number(*v, key);
        const int i = static_cast<int>(d);
        if (static_cast<double>(i) != d) throw ConfigError(qualified(key) + " must be an integer");
        return i;
    }
    std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
        const Value* v = find(key);
        if (!v) return fallback;
        std::uint64_t out = 0;
        const auto [ptr, ec] =
            std::from_chars(v->raw.data(), v->raw.data() + v->raw.size(), out);
        if (ec != std::errc{} || ptr != v->raw.data() + v->raw.size())
            throw ConfigError(qualified(key) + " must be an unsigned integer seed");
        return out;
    }
    std::string text(const std::string& key, const std::string& fallback) {
        const Value* v = find(key);
        if (!v) return fallback;
        if (const std::string* s = std::get_if<std::string>(&v->data)) return *s;
        throw ConfigError(qualified(key) + " must be a string");
    }
    Vec3 vec3(const std::string& key, const Vec3& fallback) {
        const Value* v = find(key);
        if (!v) return fallback;
        const Array& a = as_array(*v, key);
        if (a.size() != 3) throw ConfigError(qualified(key) + " must be an array of 3 numbers");
        return {as_number(a[0], key), as_number(a[1], key), as_number(a[2], key)};
    }
    Mat3 mat3(const std::string& key, const Mat3& fallback) {
        const Value* v = find(key);
        if (!v) return fallback;
        Mat3 m;
        const Array& rows = as_array(*v, key);
        if (rows.size() != 3) throw ConfigError(qualified(key) + " must be a 3x3 nested array");
        for (int i = 0; i < 3; ++i) {
            const Array& row = as_array(rows[i], key);
            if (row.size() != 3) throw ConfigError(qualified(key) + " must be a 3x3 nested array");
            for (int j = 0; j < 3; ++j) m(i, j) = as_number(row[j], key);
        }
        return m;
    }
    Eigen::MatrixXd matrix(const std::string& key) {
        const Value* v = find(key);
        if (!v) throw ConfigError("missing required key " + qualified(key));
        const Array& rows = as_array(*v, key);
        if (rows.empty()) throw ConfigError(qualified(key) + " must be a non-empty nested array");
        const Array& first = as_array(rows[0], key);
        Eigen::MatrixXd m(rows.size(), first.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Array& row = as_array(rows[i], key);
            if (row.size() != first.size())
                throw ConfigError(qualified(key) + " rows must have equal length");
            for (std::size_t j = 0; j < row.size(); ++j) m(i, j) = as_number(row[j], key);
        }
        return m;
    }
    Eigen::VectorXd vector(const std::string& key, const Eigen::VectorXd& fallback) {
        const Value* v = find(key);
        if (!v) return fallback;
        const Array& a = as_array(*v, key);
        Eigen::VectorXd out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out(i) = as_number(a[i], key);
        return out;
    }

    void finish() const {
        if (!table_) return;
        for (const auto& [key, value] : *table_)
            if (!consumed_.contains(key)) throw ConfigError("unknown key " + qualified(key));
    }

  private:
    std::string qualified(const std::string& key) const { return name_ + "." + key; }
    double as_number(const Value& v, const std::string& key) const {
        if (const double* d = std::get_if<double>(&v.data)) return *d;
        throw ConfigError(qualified(key) + " must be a number");
    }
    const Array& as_array(const Value& v, const std::string& key) const {
        if (const Array* a = std::get_if<Array>(&v.data)) return *a;
        throw ConfigError(qualified(key) + " must be an array");
    }

    std::string name_;
    const Table* table_ = nullptr;
    std::set<std::string> consumed_;
};

}  // namespace

Scenario parse_scenario(const std::string& text) {
    const Document doc = parse_document(text);
    for (const auto& [name, table] : doc) {
        static const std::set<std::string> known{
            "hose",          "receiver",           "autopilot",
            "disturbances",  "disturbances.bow_wave", "disturbances.affine",
            "disturbances.gust", "tilc",            "campaign"};
        if (!known.contains(name)) throw ConfigError("unknown section [" + name + "]");
    }

    Scenario sc;

    Section hose(doc, "hose");
    sc.hose.n_links = hose.integer("n_links", sc.hose.n_links);
    sc.hose.link_length = hose.number("link_length", sc.hose.link_length);
    sc.hose.link_mass = hose.number("link_mass", sc.hose.link_mass);
    sc.hose.drogue_mass = hose.number("drogue_mass", sc.hose.drogue_mass);
    sc.hose.link_drag_coeff = hose.number("link_drag_coeff", sc.hose.link_drag_coeff);
    sc.hose.link_diameter = hose.number("link_diameter", sc.hose.link_diameter);
    sc.hose.drogue_drag_area = hose.number("drogue_drag_area", sc.hose.drogue_drag_area);
    sc.hose.air_density = hose.number("air_density", sc.hose.air_density);
    sc.hose.freestream = hose.number("freestream", sc.hose.freestream);
    sc.hose.gravity = hose.number("gravity", sc.hose.gravity);
    sc.hose.joint_damping = hose.number("joint_damping", sc.hose.joint_damping);
    hose.finish();

    Section receiver(doc, "receiver");
    sc.receiver.a = receiver.matrix("A");
    sc.receiver.b = receiver.matrix("B");
    sc.receiver.g = receiver.matrix("G");
    sc.receiver.c = receiver.matrix("C");
    sc.receiver.x0 = receiver.vector("x0", Eigen::VectorXd::Zero(sc.receiver.a.rows()));
    sc.receiver.u0 = receiver.vector("u0", Eigen::VectorXd::Zero(sc.receiver.b.cols()));
    sc.receiver.p_pr0 = receiver.vec3("p_pr0", Vec3{});
    receiver.finish();

    Section autopilot(doc, "autopilot");
    sc.autopilot.k_p = autopilot.matrix("K_P");
    sc.autopilot.k_i = autopilot.matrix("K_I");
    sc.autopilot.closure_speed = autopilot.number("closure_speed", sc.autopilot.closure_speed);
    sc.autopilot.integrator_clamp =
        autopilot.vec3("integrator_clamp", default_autopilot_gains(sc.autopilot.closure_speed)
                                               .integrator_clamp);
    autopilot.finish();

    Section dist(doc, "disturbances");
    const std::string tier = dist.text("tier", "physical");
    if (tier == "physical") {
        sc.tier = DisturbanceTier::Physical;
    } else if (tier == "affine") {
        sc.tier = DisturbanceTier::Affine;
    } else {
        throw ConfigError("disturbances.tier must be \"physical\" or \"affine\"");
    }
    sc.noise.probe_bound = dist.number("probe_bound", sc.noise.probe_bound);
    sc.noise.drogue_bound = dist.number("drogue_bound", sc.noise.drogue_bound);
    sc.noise.turbulence_intensity =
        dist.number("turbulence_intensity", sc.noise.turbulence_intensity);
    sc.noise.turbulence_correlation =
        dist.number("turbulence_correlation", sc.noise.turbulence_correlation);
    sc.noise.measurement_sigma = dist.number("measurement_sigma", sc.noise.measurement_sigma);
    sc.drogue_wind_gain = dist.number("drogue_wind_gain", sc.drogue_wind_gain);
    sc.receiver_wind_gain = dist.number("receiver_wind_gain", sc.receiver_wind_gain);
    dist.finish();

    Section bow(doc, "disturbances.bow_wave", /*required=*/false);
    sc.bow_wave.amplitude = bow.number("amplitude", sc.bow_wave.amplitude);
    sc.bow_wave.radial_scale = bow.number("radial_scale", sc.bow_wave.radial_scale);
    sc.bow_wave.axial_scale = bow.number("axial_scale", sc.bow_wave.axial_scale);
    sc.bow_wave.radial_gain = bow.number("radial_gain", sc.bow_wave.radial_gain);
    sc.bow_wave.axial_gain = bow.number("axial_gain", sc.bow_wave.axial_gain);
    sc.bow_wave.axial_lead = bow.number("axial_lead", sc.bow_wave.axial_lead);
    bow.finish();

    Section affine(doc, "disturbances.affine", /*required=*/false);
    sc.affine_m0 = affine.vec3("m0", sc.affine_m0);
    sc.affine_m1 = affine.mat3("M1", sc.affine_m1);
    sc.affine_allow_asymmetric_m1 =
        affine.boolean("allow_asymmetric", sc.affine_allow_asymmetric_m1);
    affine.finish();

    Section gust(doc, "disturbances.gust", /*required=*/false);
    sc.noise.gust.amplitude = gust.vec3("amplitude", sc.noise.gust.amplitude);
    sc.noise.gust.onset_time = gust.number("onset_time", sc.noise.gust.onset_time);
    sc.noise.gust.ramp_duration = gust.number("ramp_duration", sc.noise.gust.ramp_duration);
    gust.finish();

    Section tilc(doc, "tilc");
    sc.tilc_gains.k_alpha = tilc.vec3("k_alpha", sc.tilc_gains.k_alpha);
    sc.tilc_gains.k_p = tilc.vec3("k_p", sc.tilc_gains.k_p);
    sc.warm_start_offset = tilc.vec3("warm_start_offset", sc.warm_start_offset);
    sc.warm_start_tracking = tilc.vec3("warm_start_tracking", sc.warm_start_tracking);
    tilc.finish();

    Section campaign(doc, "campaign");
    sc.criterion_radius = campaign.number("criterion_radius", sc.criterion_radius);
    sc.standby_offset = campaign.number("standby_offset", sc.standby_offset);
    sc.observation_window = campaign.number("observation_window", sc.observation_window);
    sc.dt = campaign.number("dt", sc.dt);
    sc.max_attempt_duration = campaign.number("max_attempt_duration", sc.max_attempt_duration);
    sc.approach_penetration = campaign.number("approach_penetration", sc.approach_penetration);
    sc.attempts = campaign.integer("attempts", sc.attempts);
    sc.master_seed = campaign.seed("seed", sc.master_seed);
    sc.trajectory_decimation = campaign.integer("trajectory_decimation", sc.trajectory_decimation);
    campaign.finish();

    return sc;
}

Scenario load_scenario(const std::string& path, bool validate) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Scenario sc = parse_scenario(buf.str());
    if (validate) sc.validate();
    return sc;
}

}  // namespace aartilc
