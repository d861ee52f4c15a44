#include "fockbath/presets.hpp"

#include <stdexcept>

namespace fockbath {

namespace {

// Flat (l, m, alpha, beta, gamma, delta) order, delta fastest.
constexpr double kCouplingValues[64] = {
    0.61618302778640632,    -0.011417709484330419,  -0.011417709484330419,  0.0076242978375301437,
    0.01772516751162214,    0.0056597285768843287,  0.0056597285768843287,  0.017725167511624056,
    0.01772516751162214,    0.0056597285768843287,  0.0056597285768843287,  0.017725167511624056,
    0.0076242978375587319,  -0.011417709484999036,  -0.011417709484999039,  0.6161830277863769,
    -0.2849887142513472,    -0.0076489231891305239, -0.0076489231891305239, -0.0049099216603560765,
    0.072345215519660527,   -0.0072487491493927929, -0.0072487491493927929, -0.028217298237740218,
    -0.028217298237766125,  -0.0072487491495336846, -0.0072487491495336863, 0.07234521551864681,
    -0.0049099216602365081, -0.0076489231887848725, -0.0076489231887848725, -0.28498871425161776,
    -0.2849887142513472,    -0.0076489231891305239, -0.0076489231891305239, -0.0049099216603560765,
    -0.028217298237766125,  -0.0072487491495336846, -0.0072487491495336863, 0.07234521551864681,
    0.072345215519660527,   -0.0072487491493927929, -0.0072487491493927929, -0.028217298237740218,
    -0.0049099216602365081, -0.0076489231887848725, -0.0076489231887848725, -0.28498871425161776,
    0.25248482542766815,    0.0044031081771532731,  0.0044031081771532714,  0.018073445768836707,
    -0.012552989183695192,  0.0037420482187568525,  0.0037420482187568525,  -0.012552989182853297,
    -0.012552989183695192,  0.0037420482187568525,  0.0037420482187568525,  -0.012552989182853297,
    0.018073445768902959,   0.0044031081768569095,  0.0044031081768569095,  0.25248482542770667,
};

}  // namespace

CouplingTensor paper_coupling_tensor() {
  CouplingTensor c;
  int i = 0;
  for (int l = 0; l < 2; ++l)
    for (int m = 0; m < 2; ++m)
      for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be)
          for (int ga = 0; ga < 2; ++ga)
            for (int de = 0; de < 2; ++de) c.at(l, m, al, be, ga, de) = kCouplingValues[i++];
  return c;
}

HubbardParams paper_params(int atoms) {
  if (atoms < 1) throw std::invalid_argument("paper_params: atoms < 1");
  HubbardParams p;
  p.J0 = 0.153;
  p.J1 = 0.226;
  p.E0 = 1.37;
  p.E1 = 3.31;
  p.U0 = 2.0 / atoms;
  p.U1 = 0.75 * p.U0;
  p.U01 = 0.5 * p.U0;
  p.Js = 0.1;
  p.gI = 2.0 / atoms;
  p.C = paper_coupling_tensor();
  return p;
}

ModelSpec paper_model(int atoms) {
  ModelSpec spec;
  spec.params = paper_params(atoms);
  spec.atoms = atoms;
  spec.bands = 2;
  return spec;
}

Protocol paper_protocol() {
  Protocol p;
  p.initial_bath = {16, 0, 10, 4};
  p.initial_probe = 0;
  p.t_switch = 100.0;
  p.t_end = 600.0;
  p.dt_sample = 0.1;
  return p;
}

}  // namespace fockbath
