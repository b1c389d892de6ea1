#pragma once

#include "ocqa/ghw.hpp"
#include "ocqa/model.hpp"

// Shared worked example used across the test suite: a four-atom cyclic-free
// Boolean query with a width-2 decomposition over a 13-fact database whose
// blocks have sizes 2,3,2,1,2,3.
namespace fixtures {

struct Worked {
  ocqa::Database db;
  ocqa::KeySpec keys;
  ocqa::Query query;
  ocqa::GHD ghd;
};

inline Worked worked_example() {
  Worked w;
  w.db = ocqa::parse_database(
      "P(a1,b).\nP(a1,c).\nP(a2,b).\nP(a2,c).\nP(a2,d).\n"
      "S(c,d).\nS(c,e).\n"
      "T(d,a1).\n"
      "U(c,f).\nU(c,g).\nU(h,i).\nU(h,j).\nU(h,k).\n");
  w.keys = ocqa::parse_keys(
      "key P = 1;\nkey S = 1;\nkey T = 1;\nkey U = 1;\n");
  w.query = ocqa::parse_query("Ans() :- P(x,y), S(y,z), T(z,x), U(y,w).");
  w.ghd.covers_answer_vars = false;
  w.ghd.root = 0;
  w.ghd.nodes.resize(3);
  w.ghd.nodes[0].parent = -1;
  w.ghd.nodes[0].children = {1, 2};
  w.ghd.nodes[0].chi = {"x", "y", "z"};
  w.ghd.nodes[0].lambda = {0, 1};
  w.ghd.nodes[1].parent = 0;
  w.ghd.nodes[1].chi = {"z", "x"};
  w.ghd.nodes[1].lambda = {2};
  w.ghd.nodes[2].parent = 0;
  w.ghd.nodes[2].chi = {"y", "w"};
  w.ghd.nodes[2].lambda = {3};
  return w;
}

}  // namespace fixtures
