#include "mst/report_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace mst {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_csv_metadata(std::ostream& os, const RunMetadata& meta) {
  os << "# version=" << meta.version << "\n";
  os << "# command=" << meta.command_line << "\n";
  if (meta.seed) os << "# seed=" << *meta.seed << "\n";
  if (meta.lambda2) {
    os << "# lambda2=" << fmt_g12(meta.lambda2->real()) << (meta.lambda2->imag() < 0 ? "" : "+")
       << fmt_g12(meta.lambda2->imag()) << "i\n";
  }
  if (meta.timestamp) os << "# timestamp=" << *meta.timestamp << "\n";
  for (const auto& [k, v] : meta.extra) os << "# " << k << "=" << v << "\n";
}

void write_json_metadata(std::ostream& os, const RunMetadata& meta) {
  os << "\"version\":\"" << json_escape(meta.version) << "\"";
  os << ",\"command\":\"" << json_escape(meta.command_line) << "\"";
  if (meta.seed) os << ",\"seed\":" << *meta.seed;
  if (meta.lambda2) {
    os << ",\"lambda2\":{\"re\":" << fmt_g12(meta.lambda2->real())
       << ",\"im\":" << fmt_g12(meta.lambda2->imag()) << "}";
  }
  if (meta.timestamp) os << ",\"timestamp\":\"" << json_escape(*meta.timestamp) << "\"";
  for (const auto& [k, v] : meta.extra) {
    os << ",\"" << json_escape(k) << "\":" << v;  // v is pre-rendered JSON
  }
}

}  // namespace mst
