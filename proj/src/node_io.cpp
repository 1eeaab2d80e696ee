// node_io.cpp

#include "isokin/error.hpp"
#include "isokin/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace isokin
{

namespace
{

std::string_view trim(std::string_view s)
{
  while(!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while(!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  return s;
}

template <class T>
bool parse_field(std::string_view field, T &out)
{
  field = trim(field);
  if(field.empty())
    return false;
  if constexpr(std::is_floating_point_v<T>)
  {
    // from_chars does not accept these spellings; strict mode rejects them anyway
    if(field == "nan" || field == "NaN" || field == "-nan")
    {
      out = std::numeric_limits<T>::quiet_NaN();
      return true;
    }
    if(field == "inf" || field == "-inf")
    {
      out = field.front() == '-' ? -std::numeric_limits<T>::infinity() : std::numeric_limits<T>::infinity();
      return true;
    }
  }
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

void append_double(std::string &out, double v)
{
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

} // namespace

NodeSet parse_nodes(const std::string &text, bool strict, NodeLabel label)
{
  NodeSet out;
  out.label = label;
  std::unordered_set<long long> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t lineNo = 0;
  bool header = false;
  while(std::getline(in, line))
  {
    ++lineNo;
    const std::string_view view = trim(line);
    if(!header)
    {
      if(view != "id,x,y,z")
        throw Error(ErrorCode::ParseError, "line 1: expected header 'id,x,y,z'", lineNo);
      header = true;
      continue;
    }
    if(view.empty())
      continue;

    std::string_view fields[4];
    std::size_t start = 0, count = 0;
    for(std::size_t i = 0; i <= view.size(); ++i)
    {
      if(i == view.size() || view[i] == ',')
      {
        if(count == 4)
        {
          count = 5;
          break;
        }
        fields[count++] = view.substr(start, i - start);
        start = i + 1;
      }
    }
    long long id = 0;
    Eigen::Vector3d p;
    if(count != 4 || !parse_field(fields[0], id) || !parse_field(fields[1], p.x()) ||
       !parse_field(fields[2], p.y()) || !parse_field(fields[3], p.z()))
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineNo) + ": expected 'id,x,y,z'", lineNo);
    if(strict && !p.allFinite())
      throw Error(ErrorCode::NonFinite, "line " + std::to_string(lineNo) + ": non-finite coordinate", lineNo);
    if(!seen.insert(id).second)
    {
      if(strict)
        throw Error(ErrorCode::DuplicateId, "line " + std::to_string(lineNo) + ": duplicate id " + std::to_string(id),
                    lineNo);
      continue; // first occurrence wins
    }
    out.ids.push_back(id);
    out.points.push_back(p);
  }
  if(!header)
    throw Error(ErrorCode::ParseError, "empty node file: expected header 'id,x,y,z'", 1);
  return out;
}

NodeSet ingest_nodes(const std::filesystem::path &path, bool strict, NodeLabel label)
{
  std::ifstream in(path, std::ios::binary);
  if(!in)
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_nodes(ss.str(), strict, label);
}

std::string format_nodes(const NodeSet &nodes)
{
  std::string out = "id,x,y,z\n";
  for(std::size_t i = 0; i < nodes.size(); ++i)
  {
    out += std::to_string(nodes.ids[i]);
    for(int k = 0; k < 3; ++k)
    {
      out += ',';
      append_double(out, nodes.points[i][k]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if(!out)
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if(!out)
    throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_nodes(const std::filesystem::path &path, const NodeSet &nodes) { write_text(path, format_nodes(nodes)); }

std::string format_obj(const SurfaceGrid &grid)
{
  std::string out;
  for(const auto &p : grid.points)
  {
    out += 'v';
    for(int k = 0; k < 3; ++k)
    {
      out += ' ';
      append_double(out, p[k]);
    }
    out += '\n';
  }
  // OBJ indices are 1-based
  for(int j = 0; j + 1 < grid.nv; ++j)
    for(int i = 0; i + 1 < grid.nu; ++i)
    {
      const int a = j * grid.nu + i + 1;
      out += "f " + std::to_string(a) + ' ' + std::to_string(a + 1) + ' ' + std::to_string(a + 1 + grid.nu) + ' ' +
             std::to_string(a + grid.nu) + '\n';
    }
  return out;
}

} // namespace isokin
