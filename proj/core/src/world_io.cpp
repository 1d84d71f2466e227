#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "findplan/error.hpp"
#include "findplan/world.hpp"

namespace findplan {

// World file grammar (one record per line, tokens separated by spaces):
//
//   findplan-world 1
//   seed <u64>
//   config <16 hex digits>
//   grid <width> <height>
//   <height rows of width characters: '#' blocked, '.' free>
//   rooms <n>
//   room <id> <type> <lo.x> <lo.y> <hi.x> <hi.y>          (n lines)
//   containers <n>
//   container <id> <type> <room_id> <room_type> <x> <y>   (n lines)
//   objects <n>
//   object <id> <type> <container_id>                     (n lines)
//   end

std::string serialize_world(const WorldModel& world) {
  std::ostringstream out;
  const auto& g = world.grid();
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(world.config_digest()));
  out << "findplan-world 1\n";
  out << "seed " << world.seed() << "\n";
  out << "config " << digest << "\n";
  out << "grid " << g.width() << " " << g.height() << "\n";
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) out << (g.is_free({x, y}) ? '.' : '#');
    out << "\n";
  }
  out << "rooms " << world.rooms().size() << "\n";
  for (const auto& r : world.rooms()) {
    out << "room " << r.id << " " << r.type_name << " " << r.lo.x << " " << r.lo.y << " "
        << r.hi.x << " " << r.hi.y << "\n";
  }
  out << "containers " << world.containers().size() << "\n";
  for (const auto& c : world.containers()) {
    out << "container " << c.id << " " << c.type_name << " " << c.room_id << " " << c.room_type
        << " " << c.pose.x << " " << c.pose.y << "\n";
  }
  out << "objects " << world.objects().size() << "\n";
  for (const auto& o : world.objects()) {
    out << "object " << o.id << " " << o.type_name << " " << o.true_container << "\n";
  }
  out << "end\n";
  return out.str();
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  /// Next line split on whitespace; throws at end of input.
  std::vector<std::string> fields(const char* expecting) {
    std::string line = raw(expecting);
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
  }

  std::string raw(const char* expecting) {
    if (pos_ >= text_.size()) {
      throw ParseError(std::string("unexpected end of file, expected ") + expecting, line_ + 1);
    }
    auto nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) nl = text_.size();
    std::string line(text_.substr(pos_, nl - pos_));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos_ = nl + 1;
    ++line_;
    return line;
  }

  int line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 0;
};

template <typename T>
T number(const std::string& tok, int line, int base = 10) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value, base);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("expected a number, found '" + tok + "'", line);
  }
  return value;
}

std::vector<std::string> expect(LineReader& in, const char* keyword, std::size_t arity) {
  auto f = in.fields(keyword);
  if (f.empty() || f[0] != keyword) {
    throw ParseError(std::string("expected '") + keyword + "' record", in.line());
  }
  if (f.size() != arity + 1) {
    throw ParseError(std::string("'") + keyword + "' record needs " + std::to_string(arity) +
                         " fields",
                     in.line());
  }
  return f;
}

}  // namespace

WorldModel parse_world(std::string_view text) {
  LineReader in(text);
  auto header = expect(in, "findplan-world", 1);
  if (header[1] != "1") throw ParseError("unsupported world file version", in.line());
  const auto seed = number<std::uint64_t>(expect(in, "seed", 1)[1], in.line());
  const auto digest = number<std::uint64_t>(expect(in, "config", 1)[1], in.line(), 16);
  auto dims = expect(in, "grid", 2);
  const int width = number<int>(dims[1], in.line());
  const int height = number<int>(dims[2], in.line());
  GridMap grid(width, height, false);
  for (int y = 0; y < height; ++y) {
    const std::string row = in.raw("grid row");
    if (static_cast<int>(row.size()) != width) {
      throw ParseError("grid row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(width),
                       in.line());
    }
    for (int x = 0; x < width; ++x) {
      if (row[static_cast<std::size_t>(x)] == '.') {
        grid.set_free({x, y}, true);
      } else if (row[static_cast<std::size_t>(x)] != '#') {
        throw ParseError("grid cells must be '.' or '#'", in.line(), x + 1);
      }
    }
  }

  std::vector<Room> rooms(number<std::size_t>(expect(in, "rooms", 1)[1], in.line()));
  for (auto& r : rooms) {
    auto f = expect(in, "room", 6);
    r.id = f[1];
    r.type_name = f[2];
    r.lo = {number<int>(f[3], in.line()), number<int>(f[4], in.line())};
    r.hi = {number<int>(f[5], in.line()), number<int>(f[6], in.line())};
  }
  std::vector<Container> containers(number<std::size_t>(expect(in, "containers", 1)[1], in.line()));
  for (auto& c : containers) {
    auto f = expect(in, "container", 6);
    c.id = f[1];
    c.type_name = f[2];
    c.room_id = f[3];
    c.room_type = f[4];
    c.pose = {number<int>(f[5], in.line()), number<int>(f[6], in.line())};
  }
  std::vector<WorldObject> objects(number<std::size_t>(expect(in, "objects", 1)[1], in.line()));
  for (auto& o : objects) {
    auto f = expect(in, "object", 3);
    o.id = f[1];
    o.type_name = f[2];
    o.true_container = f[3];
  }
  expect(in, "end", 0);

  return WorldModel(std::move(grid), std::move(rooms), std::move(containers), std::move(objects),
                    seed, digest);
}

void save_world(const WorldModel& world, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write world file '" + path.string() + "'");
  out << serialize_world(world);
}

WorldModel load_world(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open world file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_world(buffer.str());
}

}  // namespace findplan
