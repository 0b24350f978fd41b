#pragma once

#include <stdexcept>
#include <string>

namespace polyvem {

// Base class for everything this library throws on contract violations.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonPlanarFace : public Error {
public:
  NonPlanarFace(std::size_t face_id, double deviation)
      : Error("face " + std::to_string(face_id) + " deviates from its best-fit plane by " +
              std::to_string(deviation)),
        face_id(face_id), deviation(deviation) {}
  std::size_t face_id;
  double deviation;
};

class OpenCellBoundary : public Error {
public:
  explicit OpenCellBoundary(std::size_t cell_id)
      : Error("cell " + std::to_string(cell_id) + " has a non-closed or non-orientable boundary"),
        cell_id(cell_id) {}
  std::size_t cell_id;
};

class DanglingFace : public Error {
public:
  explicit DanglingFace(std::size_t face_id)
      : Error("face " + std::to_string(face_id) + " is referenced by no cell or more than two cells"),
        face_id(face_id) {}
  std::size_t face_id;
};

class DegenerateElement : public Error {
public:
  explicit DegenerateElement(std::size_t id, const std::string& detail = "")
      : Error("degenerate element " + std::to_string(id) + (detail.empty() ? "" : ": " + detail)),
        id(id) {}
  std::size_t id;
};

class NegativeVolume : public Error {
public:
  explicit NegativeVolume(std::size_t cell_id, double volume)
      : Error("cell " + std::to_string(cell_id) + " has signed volume " + std::to_string(volume)),
        cell_id(cell_id), volume(volume) {}
  std::size_t cell_id;
  double volume;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& detail)
      : Error("parse error at line " + std::to_string(line) + ": " + detail), line(line) {}
  std::size_t line;
};

class UnsupportedFormat : public Error {
public:
  explicit UnsupportedFormat(const std::string& what) : Error("unsupported format: " + what) {}
};

class NoKernelPoint : public Error {
public:
  explicit NoKernelPoint(std::size_t cell_id)
      : Error("cell " + std::to_string(cell_id) + " has an empty kernel; no interior anchor point"),
        cell_id(cell_id) {}
  std::size_t cell_id;
};

class SamplingFailed : public Error {
public:
  explicit SamplingFailed(const std::string& detail) : Error("sampling failed: " + detail) {}
};

class DegenerateInput : public Error {
public:
  explicit DegenerateInput(const std::string& detail) : Error("degenerate input: " + detail) {}
};

class NotAGrid : public Error {
public:
  explicit NotAGrid(const std::string& detail)
      : Error("point cloud has no tensor-product grid topology: " + detail) {}
};

class ClippingDegenerate : public Error {
public:
  explicit ClippingDegenerate(std::size_t cell_id)
      : Error("voronoi cell " + std::to_string(cell_id) + " collapsed during clipping"),
        cell_id(cell_id) {}
  std::size_t cell_id;
};

class CalibrationFailed : public Error {
public:
  CalibrationFailed(int level, const std::string& detail)
      : Error("calibration failed at level " + std::to_string(level) + ": " + detail),
        level(level) {}
  int level;
};

class SingularGram : public Error {
public:
  explicit SingularGram(std::size_t id)
      : Error("singular Gram system on element " + std::to_string(id)), id(id) {}
  std::size_t id;
};

class SingularSystem : public Error {
public:
  explicit SingularSystem(const std::string& detail) : Error("singular system: " + detail) {}
};

class NoConvergence : public Error {
public:
  NoConvergence(double residual, std::size_t iterations)
      : Error("iterative solver stalled at residual " + std::to_string(residual) + " after " +
              std::to_string(iterations) + " iterations"),
        residual(residual), iterations(iterations) {}
  double residual;
  std::size_t iterations;
};

class InsufficientLevels : public Error {
public:
  explicit InsufficientLevels(std::size_t got)
      : Error("need at least 2 refinement levels, got " + std::to_string(got)) {}
};

class InsufficientData : public Error {
public:
  explicit InsufficientData(const std::string& detail) : Error("insufficient data: " + detail) {}
};

} // namespace polyvem
