#include "twisim/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "twisim/errors.hpp"

namespace twisim {
namespace {

using nlohmann::json;

std::string join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

// A JSON object plus the dotted path used in error messages.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(display(), "expected an object");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : node_.items()) {
      bool known = false;
      for (std::string_view k : keys) known = known || key == k;
      if (!known) throw ConfigError(join(path_, key), "unknown key");
    }
  }

  bool has(std::string_view key) const { return node_.contains(std::string(key)); }

  Section section(std::string_view key) const {
    return Section(require(key), join(path_, key));
  }

  double number(std::string_view key) const {
    const json& v = require(key);
    if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(join(path_, key), "must be finite");
    return d;
  }

  double positive(std::string_view key) const {
    const double d = number(key);
    if (!(d > 0.0)) throw ConfigError(join(path_, key), "must be positive");
    return d;
  }

  double probability(std::string_view key) const {
    const double d = number(key);
    if (!(d >= 0.0 && d <= 1.0)) throw ConfigError(join(path_, key), "must lie in [0, 1]");
    return d;
  }

  std::int64_t positive_integer(std::string_view key) const {
    const json& v = require(key);
    if (v.is_number_integer() && v.get<std::int64_t>() > 0) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d > 0.0 && d < 9.0e15 && std::floor(d) == d) return static_cast<std::int64_t>(d);
    }
    throw ConfigError(join(path_, key), "expected a positive integer");
  }

  std::uint64_t unsigned_integer(std::string_view key) const {
    const json& v = require(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ConfigError(join(path_, key), "expected a non-negative integer");
  }

  bool boolean(std::string_view key) const {
    const json& v = require(key);
    if (!v.is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
    return v.get<bool>();
  }

  std::string choice(std::string_view key, std::initializer_list<std::string_view> options) const {
    const json& v = require(key);
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      for (std::string_view o : options) {
        if (s == o) return s;
      }
    }
    std::string allowed;
    for (std::string_view o : options) allowed += (allowed.empty() ? "" : "|") + std::string(o);
    throw ConfigError(join(path_, key), "expected one of " + allowed);
  }

  Rational rational(std::string_view key) const {
    const double d = positive(key);
    try {
      return rational_from_double(d);
    } catch (const DomainError& e) {
      throw ConfigError(join(path_, key), e.what());
    }
  }

  const std::string& path() const { return path_; }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json& require(std::string_view key) const {
    auto it = node_.find(std::string(key));
    if (it == node_.end()) throw ConfigError(join(path_, key), "missing required key");
    return *it;
  }

  const json& node_;
  std::string path_;
};

ModalityProfile parse_modality(const Section& root, Modality m, const Rational& video,
                               const Rational& token) {
  const Section s = root.section("modality").section(to_string(m));
  s.allow_only({"sample_rate_hz", "bits_per_sample", "packet_bits"});
  const Rational rate = s.rational("sample_rate_hz");
  const std::int64_t bits = s.positive_integer("bits_per_sample");
  const std::int64_t packet = s.positive_integer("packet_bits");
  try {
    return ModalityProfile(m, rate, bits, packet, video, token);
  } catch (const DomainError& e) {
    throw ConfigError(s.path(), e.what());
  }
}

ChannelSettings parse_channel(const Section& root, Modality m) {
  const Section s = root.section("channel").section(to_string(m));
  s.allow_only({"bandwidth_hz", "snr_db", "outage_prob"});
  ChannelSettings c;
  c.bandwidth_hz = s.positive("bandwidth_hz");
  c.snr_db = s.number("snr_db");
  c.outage_prob = s.number("outage_prob");
  if (!(c.outage_prob > 0.0 && c.outage_prob < 1.0)) {
    throw ConfigError(s.path() + ".outage_prob", "must lie in (0, 1)");
  }
  if (!(snr_db_to_linear(c.snr_db) > 0.0) || !std::isfinite(snr_db_to_linear(c.snr_db))) {
    throw ConfigError(s.path() + ".snr_db", "linear SNR out of range");
  }
  return c;
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
  }
  const Section root(doc, "");
  root.allow_only({"modality", "channel", "source", "wrapper", "baseline", "surrogate", "run"});
  root.section("modality").allow_only({"audio", "visual"});
  root.section("channel").allow_only({"audio", "visual"});

  const Section source = root.section("source");
  source.allow_only({"video_duration_s", "token_duration_s"});
  const Rational video = source.rational("video_duration_s");
  const Rational token = source.rational("token_duration_s");
  if ((video / token).denominator() != 1) {
    throw ConfigError(source.path() + ".token_duration_s",
                      "must divide video_duration_s into a whole number of tokens");
  }

  PerModality<ModalityProfile> profiles{parse_modality(root, Modality::kAudio, video, token),
                                        parse_modality(root, Modality::kVisual, video, token)};
  PerModality<ChannelSettings> channels{parse_channel(root, Modality::kAudio),
                                        parse_channel(root, Modality::kVisual)};
  RunConfig config(std::move(profiles), channels);

  const Section wrapper = root.section("wrapper");
  wrapper.allow_only({"twi_variant", "fixed_tw_s", "pointer_mode", "causal_mode"});
  const std::string variant = wrapper.choice("twi_variant", {"pamo", "tomo", "fixed"});
  if (variant == "pamo") {
    config.twi = TwiVariant::pamo();
  } else if (variant == "tomo") {
    config.twi = TwiVariant::tomo();
  } else {
    config.twi = TwiVariant::fixed(wrapper.positive("fixed_tw_s"));
  }
  if (wrapper.has("pointer_mode")) {
    config.pointer_mode =
        wrapper.choice("pointer_mode", {"max", "min"}) == "max" ? PointerMode::kMax : PointerMode::kMin;
  }
  if (wrapper.has("causal_mode") && wrapper.boolean("causal_mode")) {
    config.reception = ReceptionMode::kCausal;
  }

  const Section baseline = root.section("baseline");
  baseline.allow_only({"reference"});
  const std::string ref = baseline.choice("reference", {"audio", "visual", "oracle"});
  config.reference = ref == "audio"    ? ReferencePolicy::kAudio
                     : ref == "visual" ? ReferencePolicy::kVisual
                                       : ReferencePolicy::kOracleFastest;

  const Section surrogate = root.section("surrogate");
  surrogate.allow_only({"p_floor", "p_full", "w_a", "w_v"});
  if (surrogate.has("p_floor")) config.surrogate.p_floor = surrogate.probability("p_floor");
  config.surrogate.p_full = surrogate.probability("p_full");
  config.surrogate.w_audio = surrogate.number("w_a");
  config.surrogate.w_visual = surrogate.number("w_v");
  if (config.surrogate.p_floor > config.surrogate.p_full) {
    throw ConfigError("surrogate.p_floor", "must not exceed surrogate.p_full");
  }
  if (config.surrogate.w_audio < 0.0) throw ConfigError("surrogate.w_a", "must be non-negative");
  if (config.surrogate.w_visual < 0.0) throw ConfigError("surrogate.w_v", "must be non-negative");
  if (std::fabs(config.surrogate.w_audio + config.surrogate.w_visual - 1.0) > 1e-9) {
    throw ConfigError("surrogate.w_v", "w_a + w_v must equal 1");
  }

  const Section run = root.section("run");
  run.allow_only({"n_observations", "seed"});
  config.n_observations = run.positive_integer("n_observations");
  config.seed = run.unsigned_integer("seed");

  try {
    config.validate();
  } catch (const DomainError& e) {
    throw ConfigError("<document>", e.what());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return parse_config(text.str());
}

}  // namespace twisim
