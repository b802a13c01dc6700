#include "cvqd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace cvqd {

namespace {

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string opt_fmt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string();
}

}  // namespace

std::string csv_string(const std::vector<OutputRow>& rows) {
  std::string out{kCsvHeader};
  out += '\n';
  for (const OutputRow& r : rows) {
    out += fmt(r.delta_over_omega_m);
    out += ',';
    out += std::to_string(r.block_id);
    for (const auto* field : {&r.discord, &r.s_minus, &r.s_plus, &r.s_pt_minus,
                              &r.s_pt_plus, &r.b1, &r.b2, &r.b3, &r.b4}) {
      out += ',';
      out += opt_fmt(*field);
    }
    out += r.clamped ? ",1" : ",0";
    out += r.stable ? ",1\n" : ",0\n";
  }
  return out;
}

std::string stability_csv_string(const std::vector<StabilityRow>& rows) {
  if (rows.empty()) return "delta_over_omega_m,verdict,spectral_abscissa,consistent\n";
  const int degree = static_cast<int>(rows.front().coeffs.size()) - 1;
  std::string out = "delta_over_omega_m";
  for (int i = 0; i <= degree; ++i) out += ",S_" + std::to_string(i);
  out += ",verdict,spectral_abscissa,consistent\n";
  for (const StabilityRow& r : rows) {
    out += fmt(r.delta_over_omega_m);
    for (int i = degree; i >= 0; --i) {  // coeffs stored descending, emit S_0 first
      out += ',';
      out += fmt(r.coeffs[i]);
    }
    out += ',';
    out += to_string(r.verdict);
    out += ',';
    out += fmt(r.spectral_abscissa);
    out += r.consistent ? ",1\n" : ",0\n";
  }
  return out;
}

std::string json_string(const std::vector<OutputRow>& rows, const SweepSpec& spec) {
  nlohmann::json doc;
  doc["scenario"] = to_string(spec.scenario.id);
  doc["variant"] =
      spec.variant == DiscordVariant::Standard ? "standard" : "literal-paper";
  nlohmann::json out_rows = nlohmann::json::array();
  auto put = [](nlohmann::json& obj, const char* key, const std::optional<double>& v) {
    if (v)
      obj[key] = *v;
    else
      obj[key] = nullptr;
  };
  for (const OutputRow& r : rows) {
    nlohmann::json obj;
    obj["delta_over_omega_m"] = r.delta_over_omega_m;
    obj["block_id"] = r.block_id;
    put(obj, "discord", r.discord);
    put(obj, "s_minus", r.s_minus);
    put(obj, "s_plus", r.s_plus);
    put(obj, "s_pt_minus", r.s_pt_minus);
    put(obj, "s_pt_plus", r.s_pt_plus);
    put(obj, "b1", r.b1);
    put(obj, "b2", r.b2);
    put(obj, "b3", r.b3);
    put(obj, "b4", r.b4);
    obj["clamped"] = r.clamped;
    obj["stable"] = r.stable;
    out_rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(out_rows);
  return doc.dump(2) + "\n";
}

namespace {

constexpr double kSvgWidth = 840, kSvgHeight = 520;
constexpr double kMarginLeft = 70, kMarginRight = 24, kMarginTop = 24, kMarginBottom = 56;

const char* kPalette[kBlockCount] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string svg_string(const std::vector<OutputRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("svg_string: no rows");

  double xlo = rows.front().delta_over_omega_m, xhi = xlo;
  double ylo = 0.0, yhi = 1.1;
  for (const OutputRow& r : rows) {
    xlo = std::min(xlo, r.delta_over_omega_m);
    xhi = std::max(xhi, r.delta_over_omega_m);
    if (r.discord) {
      ylo = std::min(ylo, *r.discord);
      yhi = std::max(yhi, *r.discord);
    }
  }
  if (!(xhi > xlo)) { xlo -= 0.5; xhi += 0.5; }
  yhi += 0.05 * (yhi - ylo);

  const double plot_w = kSvgWidth - kMarginLeft - kMarginRight;
  const double plot_h = kSvgHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - xlo) / (xhi - xlo) * plot_w; };
  auto py = [&](double y) { return kMarginTop + (yhi - y) / (yhi - ylo) * plot_h; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kSvgWidth, "%.0f") +
         "\" height=\"" + fmt(kSvgHeight, "%.0f") + "\" viewBox=\"0 0 " +
         fmt(kSvgWidth, "%.0f") + " " + fmt(kSvgHeight, "%.0f") + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // frame and ticks
  svg += "<g stroke=\"black\" fill=\"none\" stroke-width=\"1\">\n";
  svg += "<rect x=\"" + fmt(kMarginLeft, "%.2f") + "\" y=\"" + fmt(kMarginTop, "%.2f") +
         "\" width=\"" + fmt(plot_w, "%.2f") + "\" height=\"" + fmt(plot_h, "%.2f") +
         "\"/>\n";
  svg += "</g>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  constexpr int kTicks = 6;
  for (int t = 0; t < kTicks; ++t) {
    const double xv = xlo + (xhi - xlo) * t / (kTicks - 1);
    const double yv = ylo + (yhi - ylo) * t / (kTicks - 1);
    svg += "<line x1=\"" + fmt(px(xv), "%.2f") + "\" y1=\"" + fmt(kMarginTop + plot_h, "%.2f") +
           "\" x2=\"" + fmt(px(xv), "%.2f") + "\" y2=\"" +
           fmt(kMarginTop + plot_h + 5, "%.2f") + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(px(xv), "%.2f") + "\" y=\"" +
           fmt(kMarginTop + plot_h + 18, "%.2f") + "\" text-anchor=\"middle\">" +
           fmt(xv, "%.4g") + "</text>\n";
    svg += "<line x1=\"" + fmt(kMarginLeft - 5, "%.2f") + "\" y1=\"" + fmt(py(yv), "%.2f") +
           "\" x2=\"" + fmt(kMarginLeft, "%.2f") + "\" y2=\"" + fmt(py(yv), "%.2f") +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(kMarginLeft - 8, "%.2f") + "\" y=\"" + fmt(py(yv) + 4, "%.2f") +
           "\" text-anchor=\"end\">" + fmt(yv, "%.4g") + "</text>\n";
  }
  svg += "<text x=\"" + fmt(kMarginLeft + plot_w / 2, "%.2f") + "\" y=\"" +
         fmt(kSvgHeight - 12, "%.2f") +
         "\" text-anchor=\"middle\" font-size=\"15\">\xCE\x94/\xCF\x89_m</text>\n";
  svg += "<text x=\"" + fmt(18.0, "%.2f") + "\" y=\"" + fmt(kMarginTop + plot_h / 2, "%.2f") +
         "\" text-anchor=\"middle\" font-size=\"15\">D</text>\n";
  svg += "</g>\n";

  // reference line at discord = 1
  svg += "<line x1=\"" + fmt(px(xlo), "%.2f") + "\" y1=\"" + fmt(py(1.0), "%.2f") +
         "\" x2=\"" + fmt(px(xhi), "%.2f") + "\" y2=\"" + fmt(py(1.0), "%.2f") +
         "\" stroke=\"#888888\" stroke-dasharray=\"6,4\"/>\n";

  // one polyline per contiguous stable run of each block
  int legend_slot = 0;
  for (int block = 1; block <= kBlockCount; ++block) {
    std::vector<std::string> segment;
    bool seen = false;
    auto flush = [&]() {
      if (segment.size() >= 2) {
        std::string points;
        for (const std::string& p : segment) {
          if (!points.empty()) points += ' ';
          points += p;
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += kPalette[block - 1];
        svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
      }
      segment.clear();
    };
    for (const OutputRow& r : rows) {
      if (r.block_id != block) continue;
      seen = true;
      if (r.discord)
        segment.push_back(fmt(px(r.delta_over_omega_m), "%.2f") + "," +
                          fmt(py(*r.discord), "%.2f"));
      else
        flush();  // gap: no interpolation across missing points
    }
    flush();
    if (seen) {
      svg += "<text font-family=\"sans-serif\" font-size=\"12\" x=\"" +
             fmt(kMarginLeft + plot_w - 80, "%.2f") + "\" y=\"" +
             fmt(kMarginTop + 16 + 14 * legend_slot, "%.2f") + "\" fill=\"";
      svg += kPalette[block - 1];
      svg += "\">block " + std::to_string(block) + "</text>\n";
      ++legend_slot;
    }
  }
  svg += "</svg>\n";
  return svg;
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  file.flush();
  if (!file) throw std::runtime_error("write failed: " + path);
}

void emit_csv(const std::vector<OutputRow>& rows, const std::string& path) {
  write_file(path, csv_string(rows));
}

void emit_json(const std::vector<OutputRow>& rows, const SweepSpec& spec,
               const std::string& path) {
  write_file(path, json_string(rows, spec));
}

void emit_plot(const std::vector<OutputRow>& rows, const std::string& path) {
  write_file(path, svg_string(rows));
}

// --------------------------------------------------------------------------
// config parsing

namespace {

struct ConfigEntry {
  std::string value;
  int line;
};

using Section = std::map<std::string, ConfigEntry>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(const ConfigEntry& entry, const std::string& key) {
  double v{};
  const char* begin = entry.value.data();
  const char* end = begin + entry.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError(entry.line, "'" + key + "' expects a real number, got '" +
                                     entry.value + "'");
  return v;
}

int parse_int(const ConfigEntry& entry, const std::string& key) {
  int v{};
  const char* begin = entry.value.data();
  const char* end = begin + entry.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError(entry.line, "'" + key + "' expects an integer, got '" +
                                     entry.value + "'");
  return v;
}

std::vector<int> parse_blocks(const ConfigEntry& entry) {
  std::vector<int> blocks;
  std::stringstream stream{entry.value};
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::string_view token = trim(item);
    int v{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw ParseError(entry.line, "'blocks' expects comma-separated integers");
    blocks.push_back(v);
  }
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  return blocks;
}

DiscordVariant parse_variant(const std::string& text) {
  if (text == "standard") return DiscordVariant::Standard;
  if (text == "literal-paper") return DiscordVariant::LiteralPaper;
  throw ValidationError("variant", "must be 'standard' or 'literal-paper'");
}

// consume a key if present
std::optional<ConfigEntry> take(Section& section, const std::string& key) {
  auto it = section.find(key);
  if (it == section.end()) return std::nullopt;
  ConfigEntry entry = it->second;
  section.erase(it);
  return entry;
}

void set_both_cavities(SystemParams& params, double CavityParams::* member, double v) {
  params.cavity_a.*member = v;
  params.cavity_b.*member = v;
}

}  // namespace

SweepSpec parse_config(std::string_view text) {
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw ParseError(line_no, "malformed section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (current != "scenario" && current != "grid" && current != "outputs")
        throw ValidationError(current, "unknown section");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line_no, "expected 'key = value'");
    if (current.empty())
      throw ParseError(line_no, "key outside any [section]");
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (!sections[current].emplace(key, ConfigEntry{value, line_no}).second)
      throw ValidationError(key, "duplicate key");
  }

  SweepSpec spec;
  Section scenario = sections["scenario"];
  Section grid = sections["grid"];
  Section outputs = sections["outputs"];

  const std::string id_text =
      take(scenario, "id").value_or(ConfigEntry{"a", 0}).value;
  const ScenarioId id = scenario_id_from_string(id_text);
  spec.scenario = scenario_preset(id);

  if (auto entry = take(scenario, "variant")) spec.variant = parse_variant(entry->value);
  if (auto entry = take(scenario, "blocks")) spec.blocks = parse_blocks(*entry);

  SystemParams& params = spec.scenario.params;
  const bool custom = id == ScenarioId::Custom;
  struct RateKey {
    const char* key;
    double CavityParams::* member;
  };
  constexpr RateKey kRateKeys[] = {
      {"omega_m", &CavityParams::omega_m}, {"kappa", &CavityParams::kappa},
      {"gamma_m", &CavityParams::gamma_m}, {"gamma_sm", &CavityParams::gamma_sm},
      {"Omega", &CavityParams::Omega},     {"mu", &CavityParams::mu},
      {"S", &CavityParams::S}};
  for (const RateKey& rate : kRateKeys) {
    if (auto entry = take(scenario, rate.key)) {
      if (!custom)
        throw ValidationError(rate.key, "only valid with id = custom");
      set_both_cavities(params, rate.member, parse_double(*entry, rate.key));
    } else if (custom) {
      throw ValidationError(rate.key, "required when id = custom");
    }
  }
  if (auto entry = take(scenario, "nbar"))
    set_both_cavities(params, &CavityParams::nbar, parse_double(*entry, "nbar"));
  bool m_overridden = false;
  if (auto entry = take(scenario, "N")) params.N_sq = parse_double(*entry, "N");
  if (auto entry = take(scenario, "M")) {
    params.M_sq = parse_double(*entry, "M");
    m_overridden = true;
  }
  if (!m_overridden) params.M_sq = ideal_squeezing_m(params.N_sq);
  if (auto entry = take(scenario, "J")) params.J = parse_double(*entry, "J");

  if (auto entry = take(grid, "from")) spec.grid.from = parse_double(*entry, "from");
  if (auto entry = take(grid, "to")) spec.grid.to = parse_double(*entry, "to");
  if (auto entry = take(grid, "steps")) spec.grid.steps = parse_int(*entry, "steps");

  if (auto entry = take(outputs, "csv")) spec.outputs.csv = entry->value;
  if (auto entry = take(outputs, "json")) spec.outputs.json = entry->value;
  if (auto entry = take(outputs, "svg")) spec.outputs.svg = entry->value;

  for (const Section* leftover : {&scenario, &grid, &outputs})
    if (!leftover->empty())
      throw ValidationError(leftover->begin()->first, "unknown key");

  spec.validate();
  return spec;
}

std::string serialize_config(const SweepSpec& spec) {
  const SystemParams& params = spec.scenario.params;
  if (!(params.cavity_a == params.cavity_b))
    throw ValidationError("scenario",
                          "config files cannot represent asymmetric cavities");
  if (spec.scenario.id != ScenarioId::Custom) {
    SweepSpec expected;
    expected.scenario = scenario_preset(spec.scenario.id);
    SystemParams& ep = expected.scenario.params;
    set_both_cavities(ep, &CavityParams::nbar, params.cavity_a.nbar);
    ep.N_sq = params.N_sq;
    ep.M_sq = params.M_sq;
    ep.J = params.J;
    if (!(ep == params))
      throw ValidationError("scenario",
                            "preset rates were modified; serialize with id = custom");
  }

  auto num = [](double v) { return fmt(v, "%.17g"); };
  std::string out = "[scenario]\n";
  out += "id = " + std::string(to_string(spec.scenario.id)) + "\n";
  out += "variant = ";
  out += spec.variant == DiscordVariant::Standard ? "standard" : "literal-paper";
  out += "\nblocks = ";
  for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(spec.blocks[i]);
  }
  out += '\n';
  if (spec.scenario.id == ScenarioId::Custom) {
    const CavityParams& c = params.cavity_a;
    out += "omega_m = " + num(c.omega_m) + "\n";
    out += "kappa = " + num(c.kappa) + "\n";
    out += "gamma_m = " + num(c.gamma_m) + "\n";
    out += "gamma_sm = " + num(c.gamma_sm) + "\n";
    out += "Omega = " + num(c.Omega) + "\n";
    out += "mu = " + num(c.mu) + "\n";
    out += "S = " + num(c.S) + "\n";
  }
  out += "nbar = " + num(params.cavity_a.nbar) + "\n";
  out += "N = " + num(params.N_sq) + "\n";
  out += "M = " + num(params.M_sq) + "\n";
  out += "J = " + num(params.J) + "\n";
  out += "\n[grid]\n";
  out += "from = " + num(spec.grid.from) + "\n";
  out += "to = " + num(spec.grid.to) + "\n";
  out += "steps = " + std::to_string(spec.grid.steps) + "\n";
  if (!spec.outputs.csv.empty() || !spec.outputs.json.empty() || !spec.outputs.svg.empty()) {
    out += "\n[outputs]\n";
    if (!spec.outputs.csv.empty()) out += "csv = " + spec.outputs.csv + "\n";
    if (!spec.outputs.json.empty()) out += "json = " + spec.outputs.json + "\n";
    if (!spec.outputs.svg.empty()) out += "svg = " + spec.outputs.svg + "\n";
  }
  return out;
}

}  // namespace cvqd
