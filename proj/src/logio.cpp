#include "drlb/logio.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "drlb/numio.hpp"

namespace drlb {

namespace {
constexpr const char* kHeader = "episode_id,slot,value,market_price,click";
}

std::vector<EpisodeData> parse_log(std::istream& in, int T) {
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  std::string line;
  int row = 1;
  if (!std::getline(in, line)) throw LogFormatError("missing header", row);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    throw LogFormatError(std::string("bad header, expected ") + kHeader, row);

  std::vector<EpisodeData> episodes;
  std::set<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 5)
      throw LogFormatError("expected 5 fields, got " + std::to_string(fields.size()), row);

    const std::string id(trim(fields[0]));
    if (id.empty()) throw LogFormatError("empty episode_id", row);
    const auto slot = parse_int(trim(fields[1]));
    if (!slot) throw LogFormatError("bad slot", row);
    const auto value = parse_double(trim(fields[2]));
    if (!value || *value < 0.0) throw LogFormatError("bad value", row);
    const auto price = parse_double(trim(fields[3]));
    if (!price || *price < 0.0) throw LogFormatError("bad market_price", row);
    if (*slot < 0 || *slot >= T)
      throw LogFormatError("slot " + std::to_string(*slot) + " outside [0, " +
                               std::to_string(T) + ")",
                           row);

    Impression im;
    im.slot = static_cast<int>(*slot);
    im.value = *value;
    im.market_price = *price;
    const auto click_field = trim(fields[4]);
    if (!click_field.empty()) {
      const auto click = parse_int(click_field);
      if (!click || (*click != 0 && *click != 1))
        throw LogFormatError("click must be empty, 0 or 1", row);
      im.click = static_cast<int>(*click);
    }

    if (episodes.empty() || episodes.back().episode_id != id) {
      if (!seen_ids.insert(id).second)
        throw LogFormatError("episode '" + id + "' is not contiguous", row);
      EpisodeData data;
      data.episode_id = id;
      data.T = T;
      episodes.push_back(std::move(data));
    } else if (!episodes.back().impressions.empty() &&
               im.slot < episodes.back().impressions.back().slot) {
      throw LogFormatError("slots not sorted within episode '" + id + "'", row);
    }
    episodes.back().impressions.push_back(im);
  }
  return episodes;
}

void write_log(std::ostream& out, const std::vector<EpisodeData>& episodes) {
  out << kHeader << '\n';
  for (const auto& ep : episodes) {
    for (const auto& im : ep.impressions) {
      out << ep.episode_id << ',' << im.slot << ',' << dtos(im.value) << ','
          << dtos(im.market_price) << ',';
      if (im.click) out << *im.click;
      out << '\n';
    }
  }
}

std::vector<EpisodeData> load_log_file(const std::string& path, int T) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_log(in, T);
}

void write_log_file(const std::string& path, const std::vector<EpisodeData>& episodes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_log(out, episodes);
}

}  // namespace drlb
