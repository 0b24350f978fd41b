#pragma once

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "polyvem/errors.hpp"
#include "polyvem/mesh.hpp"

namespace polyvem {

enum class MeshFormat { PMESH, VTK };

// PMESH is the canonical ASCII format:
//   PMESH 1
//   nv nf nc
//   nv lines "x y z"            coordinates, 17 significant digits
//   nf lines "k v1 ... vk"      1-based vertex ids, counterclockwise loop
//   nc lines "m ±f1 ... ±fm"    1-based face ids, sign = outward orientation
// '#' starts a comment line. An optional trailing block "POINT_DATA nv"
// followed by nv values carries a per-vertex scalar field.

namespace io_detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // next non-comment, non-blank line; false on EOF
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      std::size_t pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;
      if (line[pos] == '#') continue;
      return true;
    }
    return false;
  }

  std::size_t line_number() const { return line_no_; }

private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

} // namespace io_detail

inline void write_pmesh(const PolyMesh& mesh, std::ostream& out) {
  out << "PMESH 1\n";
  out << mesh.vertices.size() << ' ' << mesh.faces.size() << ' ' << mesh.cells.size() << '\n';
  for (const Vec3& p : mesh.vertices)
    out << io_detail::format_double(p.x) << ' ' << io_detail::format_double(p.y) << ' '
        << io_detail::format_double(p.z) << '\n';
  for (const PolyFace& f : mesh.faces) {
    out << f.vertex_loop.size();
    for (int v : f.vertex_loop) out << ' ' << v + 1;
    out << '\n';
  }
  for (const PolyCell& c : mesh.cells) {
    out << c.face_ids.size();
    for (std::size_t i = 0; i < c.face_ids.size(); ++i)
      out << ' ' << (c.face_signs[i] > 0 ? c.face_ids[i] + 1 : -(c.face_ids[i] + 1));
    out << '\n';
  }
}

inline PolyMesh read_pmesh(std::istream& in) {
  io_detail::LineReader reader(in);
  std::string line;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(reader.line_number(), msg);
  };

  if (!reader.next(line)) throw fail("empty file");
  {
    std::istringstream ss(line);
    std::string magic;
    int version = 0;
    ss >> magic >> version;
    if (magic != "PMESH") throw UnsupportedFormat("expected PMESH header, got '" + magic + "'");
    if (version != 1) throw UnsupportedFormat("PMESH version " + std::to_string(version));
  }

  std::size_t nv = 0, nf = 0, nc = 0;
  if (!reader.next(line)) throw fail("missing size line");
  {
    std::istringstream ss(line);
    if (!(ss >> nv >> nf >> nc)) throw fail("bad size line");
  }

  std::vector<Vec3> vertices(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    if (!reader.next(line)) throw fail("unexpected end of file in vertex block");
    std::istringstream ss(line);
    if (!(ss >> vertices[i].x >> vertices[i].y >> vertices[i].z))
      throw fail("bad vertex line");
  }

  std::vector<std::vector<int>> faces(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    if (!reader.next(line)) throw fail("unexpected end of file in face block");
    std::istringstream ss(line);
    std::size_t k = 0;
    if (!(ss >> k) || k < 3) throw fail("bad face line");
    faces[i].resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      int v = 0;
      if (!(ss >> v) || v < 1 || v > static_cast<int>(nv)) throw fail("face vertex id out of range");
      faces[i][j] = v - 1;
    }
  }

  std::vector<std::vector<int>> cells(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    if (!reader.next(line)) throw fail("unexpected end of file in cell block");
    std::istringstream ss(line);
    std::size_t m = 0;
    if (!(ss >> m) || m < 4) throw fail("bad cell line");
    cells[i].resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      long f = 0;
      if (!(ss >> f) || f == 0 || std::abs(f) > static_cast<long>(nf))
        throw fail("cell face id out of range");
      cells[i][j] = static_cast<int>(std::labs(f)) - 1; // orientation re-resolved on build
    }
  }

  return build_mesh(std::move(vertices), faces, cells);
}

inline void write_mesh(const PolyMesh& mesh, const std::string& path, MeshFormat format);

inline PolyMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  // peek at the first bytes to reject VTK files with a clear message
  std::string head;
  std::getline(in, head);
  in.seekg(0);
  if (head.rfind("# vtk", 0) == 0) throw UnsupportedFormat("VTK input (PMESH expected)");
  return read_pmesh(in);
}

// Append a per-vertex scalar block to an existing PMESH file.
inline void append_point_data(const std::string& path, const std::vector<double>& values) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open '" + path + "' for append");
  out << "POINT_DATA " << values.size() << '\n';
  for (double v : values) out << io_detail::format_double(v) << '\n';
}

// Read the POINT_DATA block back; empty when the file has none.
inline std::vector<double> read_point_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("POINT_DATA", 0) == 0) {
      std::istringstream ss(line.substr(10));
      std::size_t n = 0;
      ss >> n;
      std::vector<double> values(n);
      for (std::size_t i = 0; i < n; ++i)
        if (!(in >> values[i])) throw Error("truncated POINT_DATA block in '" + path + "'");
      return values;
    }
  return {};
}

// Legacy ASCII VTK export with polyhedron (type 42) cells, for viewers only.
inline void write_vtk(const PolyMesh& mesh, std::ostream& out,
                      const std::vector<double>* point_data = nullptr) {
  out << "# vtk DataFile Version 2.0\n";
  out << "polyvem mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const Vec3& p : mesh.vertices)
    out << io_detail::format_double(p.x) << ' ' << io_detail::format_double(p.y) << ' '
        << io_detail::format_double(p.z) << '\n';

  // polyhedron stream: nTotal nFaces (nPts p0 ... pk)*
  std::size_t stream_ints = 0;
  for (const PolyCell& c : mesh.cells) {
    std::size_t n = 1; // face count entry
    for (int f : c.face_ids) n += 1 + mesh.faces[f].vertex_loop.size();
    stream_ints += n + 1; // +1 for the leading total
  }
  out << "CELLS " << mesh.cells.size() << ' ' << stream_ints << '\n';
  for (const PolyCell& c : mesh.cells) {
    std::size_t n = 1;
    for (int f : c.face_ids) n += 1 + mesh.faces[f].vertex_loop.size();
    out << n << ' ' << c.face_ids.size();
    for (std::size_t lf = 0; lf < c.face_ids.size(); ++lf) {
      auto loop = mesh.oriented_face_loop(c, lf);
      out << ' ' << loop.size();
      for (int v : loop) out << ' ' << v;
    }
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.cells.size() << '\n';
  for (std::size_t i = 0; i < mesh.cells.size(); ++i) out << 42 << '\n';

  if (point_data) {
    out << "POINT_DATA " << point_data->size() << '\n';
    out << "SCALARS u double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : *point_data) out << io_detail::format_double(v) << '\n';
  }
}

inline void write_mesh(const PolyMesh& mesh, const std::string& path, MeshFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  if (format == MeshFormat::PMESH)
    write_pmesh(mesh, out);
  else
    write_vtk(mesh, out);
}

} // namespace polyvem
