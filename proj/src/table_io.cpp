#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/crc.hpp>

#include "nlbound/delta_tables.hpp"

namespace nlbound {

// Layout:
//   NLBOUND-DELTA
//   version <v>
//   n <n>
//   p <num/den>
//   checksum <crc32 of everything after this line, 8 hex digits>
//   level 0
//   <entries of the upper grid, row-major, one per line>
//   <entries of the lower grid>
//   level 1
//   ...
// Each entry is "<len>:<numerator> <len>:<denominator>" in lowest terms.

namespace {

constexpr const char* kMagic = "NLBOUND-DELTA";

std::uint32_t crc32(const std::string& bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

void put_integer(std::ostream& out, const mpz_class& z) {
  const std::string digits = z.get_str();
  out << digits.size() << ':' << digits;
}

mpz_class take_integer(std::istream& in, const std::string& origin) {
  std::size_t length = 0;
  char colon = 0;
  if (!(in >> length) || !in.get(colon) || colon != ':' || length == 0 || length > (std::size_t{1} << 24))
    throw TableFormatError(origin + ": malformed length prefix");
  std::string digits(length, '\0');
  if (!in.read(digits.data(), static_cast<std::streamsize>(length)))
    throw TableFormatError(origin + ": truncated integer");
  mpz_class z;
  if (z.set_str(digits, 10) != 0) throw TableFormatError(origin + ": malformed integer '" + digits + "'");
  return z;
}

std::string expect_field(std::istream& in, const std::string& key, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw TableHeaderError(origin + ": missing '" + key + "' header line");
  if (line.rfind(key + " ", 0) != 0) throw TableHeaderError(origin + ": expected '" + key + "', got '" + line + "'");
  return line.substr(key.size() + 1);
}

}  // namespace

void write_tables(std::ostream& out, const DeltaTables& tables) {
  std::ostringstream body;
  for (int m = 0; m <= tables.copies(); ++m) {
    body << "level " << m << '\n';
    const int side = DeltaTables::side(m);
    for (Extremum which : {Extremum::upper, Extremum::lower})
      for (int k = 0; k < side; ++k)
        for (int l = 0; l < side; ++l) {
          const Rational value(tables.scaled(which, m, k, l), tables.common_denominator(m));
          put_integer(body, value.numerator());
          body << ' ';
          put_integer(body, value.denominator());
          body << '\n';
        }
  }
  const std::string payload = body.str();
  out << kMagic << '\n'
      << "version " << kTableFormatVersion << '\n'
      << "n " << tables.copies() << '\n'
      << "p " << tables.p().fraction_str() << '\n'
      << "checksum " << std::hex << std::setw(8) << std::setfill('0') << crc32(payload) << std::dec << '\n'
      << payload;
}

DeltaTables read_tables(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw TableFormatError(origin + ": not a delta table file");

  const std::string version = expect_field(in, "version", origin);
  if (version != std::to_string(kTableFormatVersion))
    throw TableVersionError(origin + ": format version " + version + ", expected " +
                            std::to_string(kTableFormatVersion));

  int n = -1;
  Rational p;
  try {
    n = std::stoi(expect_field(in, "n", origin));
    p = Rational::parse(expect_field(in, "p", origin));
  } catch (const TableFileError&) {
    throw;
  } catch (const std::exception& e) {
    throw TableHeaderError(origin + ": bad header value: " + e.what());
  }
  if (n < 0 || n > 20) throw TableHeaderError(origin + ": implausible copy count " + std::to_string(n));
  if (p.sign() < 0 || p > Rational(1, 2)) throw TableHeaderError(origin + ": p = " + p.str() + " outside [0, 1/2]");

  const std::string declared = expect_field(in, "checksum", origin);
  std::ostringstream rest;
  rest << in.rdbuf();
  const std::string payload = rest.str();
  std::ostringstream actual;
  actual << std::hex << std::setw(8) << std::setfill('0') << crc32(payload);
  if (actual.str() != declared)
    throw TableChecksumError(origin + ": checksum " + actual.str() + " does not match header " + declared);

  DeltaTables t;
  t.p_ = p;
  const mpz_class level_factor = 2 * p.denominator();
  std::istringstream body(payload);
  mpz_class denominator = 1;
  for (int m = 0;; ++m) {
    std::string tag;
    int level = -1;
    if (!(body >> tag)) break;
    if (tag != "level" || !(body >> level) || level != m)
      throw TableFormatError(origin + ": expected 'level " + std::to_string(m) + "'");
    if (m > n) throw TableHeaderError(origin + ": body has more levels than the declared n = " + std::to_string(n));
    if (m > 0) denominator *= level_factor;
    DeltaTables::Level lv;
    lv.denominator = denominator;
    const int side = DeltaTables::side(m);
    for (auto* grid : {&lv.upper, &lv.lower}) {
      grid->reserve(static_cast<std::size_t>(side) * side);
      for (int e = 0; e < side * side; ++e) {
        const mpz_class num = take_integer(body, origin);
        const mpz_class den = take_integer(body, origin);
        if (den <= 0 || gcd(num, den) != 1)
          throw TableFormatError(origin + ": entry not a reduced rational at level " + std::to_string(m));
        if (denominator % den != 0)
          throw TableFormatError(origin + ": denominator " + den.get_str() + " inconsistent with p at level " +
                                 std::to_string(m));
        grid->push_back(num * (denominator / den));
      }
    }
    t.levels_.push_back(std::move(lv));
  }
  if (t.copies() != n)
    throw TableHeaderError(origin + ": header declares n = " + std::to_string(n) + " but body holds " +
                           std::to_string(t.copies()) + " levels");
  return t;
}

void save_tables(const DeltaTables& tables, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot write " + tmp);
    write_tables(out, tables);
    if (!out) throw std::ios_base::failure("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

DeltaTables load_tables(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  return read_tables(in, path.string());
}

DeltaTables load_tables(const std::filesystem::path& path, const Rational& p, int n) {
  DeltaTables t = load_tables(path);
  if (t.p() != p || t.copies() != n)
    throw TableHeaderError(path.string() + ": holds tables for p = " + t.p().str() + ", n = " +
                           std::to_string(t.copies()) + "; wanted p = " + p.str() + ", n = " + std::to_string(n));
  return t;
}

std::filesystem::path table_cache_path(const std::filesystem::path& dir, const Rational& p, int n) {
  return dir / ("delta_" + p.numerator().get_str() + "_" + p.denominator().get_str() + "_n" + std::to_string(n) + ".tbl");
}

}  // namespace nlbound
