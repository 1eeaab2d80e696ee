// compose.cpp

#include "isokin/compose.hpp"
#include "isokin/error.hpp"

#include <Eigen/Dense>

namespace isokin
{

namespace
{

// visits every modal function of a stage in parameter order
template <class Stage, class Fn>
void for_each_modal(Stage &stage, Fn &&fn)
{
  std::visit(
      [&](auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr(std::is_same_v<T, Elongation>)
          fn("rate", p.rate);
        else if constexpr(std::is_same_v<T, Twist>)
        {
          if(auto *m = std::get_if<ModalFunction>(&p.angle))
            fn("angle", *m);
        }
        else if constexpr(std::is_same_v<T, Shear>)
        {
          fn("s1", p.s1);
          fn("s2", p.s2);
        }
        else if constexpr(std::is_same_v<T, Source>)
          fn("strength", p.strength);
      },
      stage);
}

} // namespace

CompositeDeformation::CompositeDeformation(std::vector<DeformationPrimitive> stages, CompositeOptions options)
    : _stages(std::move(stages)), _options(options)
{
  build_map();
  sync_bend_length();
}

void CompositeDeformation::build_map()
{
  _map.clear();
  std::size_t offset = 0;
  for(std::size_t i = 0; i < _stages.size(); ++i)
  {
    for_each_modal(_stages[i], [&](const char *field, const ModalFunction &m) {
      _map.push_back({i, field, offset, m.size()});
      offset += m.size();
    });
    if(const auto *b = std::get_if<Bend2D>(&_stages[i]))
    {
      _map.push_back({i, "curvature", offset, b->curvature().size()});
      offset += b->curvature().size();
    }
  }
  _parameter_count = offset;
}

void CompositeDeformation::sync_bend_length()
{
  if(!_options.reference_height)
    return;
  const double h = *_options.reference_height;
  double length = h;
  for(auto &stage : _stages)
  {
    if(const auto *e = std::get_if<Elongation>(&stage))
      length = e->rate.integral(h);
    else if(const auto *b = std::get_if<Bend2D>(&stage))
    {
      if(!(length > 0.0))
        throw Error(ErrorCode::SingularInput, "elongated height is not positive");
      if(length != b->length())
        stage = Bend2D(b->curvature().with_scale(length), length, b->plane_rotation());
    }
  }
}

void CompositeDeformation::validate_order() const
{
  bool seenBend = false;
  for(std::size_t i = 0; i < _stages.size(); ++i)
  {
    if(seenBend)
      throw Error(ErrorCode::OrderViolation,
                  "stage " + std::to_string(i) + " (" + std::string(primitive_name(_stages[i])) +
                      ") follows a bend; bending must be composed last",
                  i);
    seenBend = is_bend(_stages[i]);
  }
}

double CompositeDeformation::base_rotation() const
{
  double angle = 0.0;
  for(const auto &stage : _stages)
    if(const auto *t = std::get_if<Twist>(&stage))
      angle += twist_angle(t->angle, 0.0);
  return angle;
}

bool CompositeDeformation::valid(const Eigen::Vector3d &x) const
{
  Eigen::Vector3d y = x;
  for(const auto &stage : _stages)
  {
    if(!isokin::validity(stage, y))
      return false;
    y = isokin::apply(stage, y);
  }
  return true;
}

Eigen::Vector3d CompositeDeformation::apply(const Eigen::Vector3d &x) const
{
  Eigen::Vector3d y = x;
  for(std::size_t i = 0; i < _stages.size(); ++i)
  {
    if(!isokin::validity(_stages[i], y))
      throw Error(ErrorCode::SingularInput,
                  "stage " + std::to_string(i) + " (" + std::string(primitive_name(_stages[i])) + ") is singular",
                  i);
    y = isokin::apply(_stages[i], y);
  }
  if(_options.counter_rotate_base)
    y = rot_z(-base_rotation()) * y;
  return y;
}

void CompositeDeformation::apply_with_gradient(const Eigen::Vector3d &x, Eigen::Vector3d &y, Eigen::Matrix3d &F) const
{
  y = x;
  F.setIdentity();
  for(std::size_t i = 0; i < _stages.size(); ++i)
  {
    if(!isokin::validity(_stages[i], y))
      throw Error(ErrorCode::SingularInput,
                  "stage " + std::to_string(i) + " (" + std::string(primitive_name(_stages[i])) + ") is singular",
                  i);
    F = isokin::gradient(_stages[i], y) * F;
    y = isokin::apply(_stages[i], y);
  }
  if(_options.counter_rotate_base)
  {
    const Eigen::Matrix3d Rz = rot_z(-base_rotation());
    y = Rz * y;
    F = Rz * F;
  }
}

Eigen::Matrix3d CompositeDeformation::gradient(const Eigen::Vector3d &x) const
{
  Eigen::Vector3d y;
  Eigen::Matrix3d F;
  apply_with_gradient(x, y, F);
  return F;
}

Eigen::VectorXd CompositeDeformation::parameters() const
{
  Eigen::VectorXd p(static_cast<Eigen::Index>(_parameter_count));
  for(const auto &slice : _map)
  {
    const auto &stage = _stages[slice.stage];
    const Eigen::VectorXd *w = nullptr;
    for_each_modal(stage, [&](const char *field, const ModalFunction &m) {
      if(slice.field == field)
        w = &m.weights();
    });
    if(const auto *b = std::get_if<Bend2D>(&stage))
      w = &b->curvature().weights();
    p.segment(static_cast<Eigen::Index>(slice.offset), static_cast<Eigen::Index>(slice.count)) = *w;
  }
  return p;
}

CompositeDeformation CompositeDeformation::with_parameters(const Eigen::VectorXd &p) const
{
  if(static_cast<std::size_t>(p.size()) != _parameter_count)
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(_parameter_count) + " parameters, got " +
                                                std::to_string(p.size()));
  CompositeDeformation out = *this;
  // bend curvatures are applied last so each backbone cache is built once, at its final length
  std::vector<std::pair<std::size_t, Eigen::VectorXd>> bends;
  for(const auto &slice : _map)
  {
    Eigen::VectorXd w = p.segment(static_cast<Eigen::Index>(slice.offset), static_cast<Eigen::Index>(slice.count));
    auto &stage = out._stages[slice.stage];
    if(std::holds_alternative<Bend2D>(stage))
    {
      bends.emplace_back(slice.stage, std::move(w));
      continue;
    }
    for_each_modal(stage, [&](const char *field, ModalFunction &m) {
      if(slice.field == field)
        m = m.with_weights(w);
    });
  }
  for(auto &[index, w] : bends)
  {
    const auto &b = std::get<Bend2D>(out._stages[index]);
    double length = b.length();
    if(_options.reference_height)
    {
      length = *_options.reference_height;
      for(std::size_t i = 0; i < index; ++i)
        if(const auto *e = std::get_if<Elongation>(&out._stages[i]))
          length = e->rate.integral(*_options.reference_height);
      if(!(length > 0.0))
        throw Error(ErrorCode::SingularInput, "elongated height is not positive", index);
    }
    out._stages[index] = Bend2D(b.curvature().with_weights(w).with_scale(length), length, b.plane_rotation());
  }
  return out;
}

} // namespace isokin
