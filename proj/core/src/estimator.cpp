#include "findplan/estimator.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "findplan/error.hpp"
#include "findplan/format.hpp"

namespace findplan {

Estimator::Estimator(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0)) throw ValidationError("smoothing alpha must be positive");
}

Estimator Estimator::train(std::span<const WorldModel> worlds, double alpha) {
  if (worlds.empty()) throw TrainingError("cannot train an estimator on an empty corpus");
  Estimator est(alpha);
  for (const auto& world : worlds) {
    for (const auto& o : world.objects()) est.object_types_.insert(o.type_name);
  }
  if (est.object_types_.empty()) throw TrainingError("training corpus contains no objects");

  for (const auto& world : worlds) {
    for (std::size_t c = 0; c < world.containers().size(); ++c) {
      const auto& container = world.container(c);
      std::set<std::string_view> present;
      for (std::size_t o : world.contents(c)) present.insert(world.object(o).type_name);
      for (const auto& type : est.object_types_) {
        est.observe(type, container.type_name, container.room_type, present.contains(type));
      }
    }
  }
  return est;
}

double Estimator::p_found(std::string_view object_type, std::string_view container_type,
                          std::string_view room_type) const {
  auto it = counts_.find(std::tuple(object_type, container_type, room_type));
  const double pos = it == counts_.end() ? 0.0 : static_cast<double>(it->second.positives);
  const double total = it == counts_.end() ? 0.0 : static_cast<double>(it->second.total);
  return (pos + alpha_) / (total + 2.0 * alpha_);
}

std::vector<double> Estimator::p_found_all(const WorldModel& world,
                                           std::string_view object_type) const {
  std::vector<double> out;
  out.reserve(world.containers().size());
  for (const auto& c : world.containers()) {
    out.push_back(p_found(object_type, c.type_name, c.room_type));
  }
  return out;
}

void Estimator::observe(std::string_view object_type, std::string_view container_type,
                        std::string_view room_type, bool contains_object) {
  object_types_.emplace(object_type);
  container_types_.emplace(container_type);
  room_types_.emplace(room_type);
  auto key = Key(object_type, container_type, room_type);
  auto& cell = counts_[key];
  ++cell.total;
  if (contains_object) ++cell.positives;
}

// Estimator file grammar:
//
//   findplan-estimator 1
//   alpha <real>
//   objects <type>...
//   containers <type>...
//   rooms <type>...
//   rows <n>
//   object container room positives total
//   <object> <container> <room> <positives> <total>    (n lines)
//   end

std::string Estimator::serialize() const {
  std::ostringstream out;
  auto join = [&](const char* key, const auto& names) {
    out << key;
    for (const auto& n : names) out << " " << n;
    out << "\n";
  };
  out << "findplan-estimator 1\n";
  out << "alpha " << format_real(alpha_) << "\n";
  join("objects", object_types_);
  join("containers", container_types_);
  join("rooms", room_types_);
  out << "rows " << counts_.size() << "\n";
  out << "object container room positives total\n";
  for (const auto& [key, count] : counts_) {
    const auto& [o, c, r] = key;
    out << o << " " << c << " " << r << " " << count.positives << " " << count.total << "\n";
  }
  out << "end\n";
  return out.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

template <typename T>
T parse_number(const std::string& tok, int line) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("expected a number, found '" + tok + "'", line);
  }
  return value;
}

}  // namespace

Estimator Estimator::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  int line_no = 0;
  auto next = [&](const char* expecting) {
    std::string line;
    if (!std::getline(in, line)) {
      throw ParseError(std::string("unexpected end of file, expected ") + expecting, line_no + 1);
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return split(line);
  };
  auto keyed = [&](const char* key, std::size_t min_fields) {
    auto f = next(key);
    if (f.empty() || f[0] != key || f.size() < min_fields + 1) {
      throw ParseError(std::string("expected '") + key + "' record", line_no);
    }
    return f;
  };

  auto header = keyed("findplan-estimator", 1);
  if (header[1] != "1") throw ParseError("unsupported estimator file version", line_no);
  const double alpha = parse_number<double>(keyed("alpha", 1)[1], line_no);
  if (!(alpha > 0.0)) throw ValidationError("line " + std::to_string(line_no) + ": alpha must be positive");
  Estimator est(alpha);
  for (auto f = keyed("objects", 0); const auto& t : std::span(f).subspan(1)) est.object_types_.insert(t);
  for (auto f = keyed("containers", 0); const auto& t : std::span(f).subspan(1)) est.container_types_.insert(t);
  for (auto f = keyed("rooms", 0); const auto& t : std::span(f).subspan(1)) est.room_types_.insert(t);
  const auto rows = parse_number<std::size_t>(keyed("rows", 1)[1], line_no);
  const auto columns = next("column header");
  if (columns != std::vector<std::string>{"object", "container", "room", "positives", "total"}) {
    throw ParseError("expected column header 'object container room positives total'", line_no);
  }
  for (std::size_t i = 0; i < rows; ++i) {
    auto f = next("table row");
    if (f.size() != 5) {
      throw ParseError("table row needs 5 fields, found " + std::to_string(f.size()), line_no);
    }
    Count count{parse_number<std::uint64_t>(f[3], line_no),
                parse_number<std::uint64_t>(f[4], line_no)};
    if (count.positives > count.total) {
      throw ValidationError("line " + std::to_string(line_no) + ": positives exceed total for (" +
                            f[0] + ", " + f[1] + ", " + f[2] + ")");
    }
    if (!est.counts_.emplace(Key(f[0], f[1], f[2]), count).second) {
      throw ParseError("duplicate row for (" + f[0] + ", " + f[1] + ", " + f[2] + ")", line_no);
    }
    est.object_types_.insert(f[0]);
    est.container_types_.insert(f[1]);
    est.room_types_.insert(f[2]);
  }
  auto end = next("'end'");
  if (end.size() != 1 || end[0] != "end") throw ParseError("expected 'end'", line_no);
  return est;
}

void Estimator::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write estimator file '" + path.string() + "'");
  out << serialize();
}

Estimator Estimator::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open estimator file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

}  // namespace findplan
