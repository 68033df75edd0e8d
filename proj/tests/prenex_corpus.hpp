#pragma once

// Sentences with one quantifier nested under temporal operators, over {p, q}.

#include <string>
#include <vector>

namespace testsupport {

inline const std::vector<std::string> kPrenexCorpus = {
    "forall x. G exists y. (p_y <-> p_x)",
    "exists x. F forall y. (p_x -> q_y)",
    "forall x. X exists y. (p_y & !p_x)",
    "exists x. X forall y. (q_y | p_x)",
    "exists x. p_x U (exists y. q_y & q_x)",
    "forall x. (exists y. p_y & p_x) U q_x",
    "exists x. (forall y. p_y | q_x) U p_x",
    "forall x. G[p] exists y. (q_y <-> p_x)",
    "exists x. F[q] forall y. (p_y -> p_x)",
    "exists x. exists y. C{x} F exists z. (p_z & q_y & p_x)",
    "forall x. forall y. C{y} G exists z. (p_z <-> (q_x | p_y))",
    "exists x. G (q_x -> exists y. (p_y & p_x))",
    "forall x. F exists y. (!p_y & q_x)",
    "exists x. (exists y. (p_y & q_x)) S p_x",
    "forall x. H exists y. (p_y | q_x)",
    "exists x. F (p_x & O exists y. (q_y & q_x))",
    "forall x. G (q_x -> Y exists y. (p_y & p_x))",
    "exists x. forall y. F exists z. (p_z & q_x & !q_y)",
    "forall x. exists y. (q_x <-> p_y) U (forall z. (p_z | q_y))",
    "exists x. X[p] exists y. (q_y & !q_x)",
    "forall x. C{x} X exists y. (p_y <-> p_x)",
    "exists x. (exists y. q_y) U[p] p_x",
    "forall x. G exists y. X (p_y <-> q_x)",
    "exists x. X (q_x S (exists y. (p_y & !p_x)))",
};

} // namespace testsupport
