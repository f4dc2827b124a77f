#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "drlb/auction.hpp"

namespace drlb {

struct LogFormatError : std::runtime_error {
  LogFormatError(const std::string& msg, int row_)
      : std::runtime_error("row " + std::to_string(row_) + ": " + msg), row(row_) {}
  int row;  // 1-based physical line number, header is row 1
};

// Impression log schema: `episode_id,slot,value,market_price,click` with an
// optional click column. Rows are grouped by episode_id with non-decreasing
// slots; every slot must fall in [0, T).
std::vector<EpisodeData> parse_log(std::istream& in, int T);
void write_log(std::ostream& out, const std::vector<EpisodeData>& episodes);

std::vector<EpisodeData> load_log_file(const std::string& path, int T);
void write_log_file(const std::string& path, const std::vector<EpisodeData>& episodes);

}  // namespace drlb
