#ifndef LSVCLUSTER_LSVCLUSTER_HPP
#define LSVCLUSTER_LSVCLUSTER_HPP

#include "lsvcluster/bounds.hpp"
#include "lsvcluster/cluster.hpp"
#include "lsvcluster/coupling.hpp"
#include "lsvcluster/datasets.hpp"
#include "lsvcluster/ensembles.hpp"
#include "lsvcluster/eval.hpp"
#include "lsvcluster/io.hpp"
#include "lsvcluster/matrix.hpp"
#include "lsvcluster/svd.hpp"

#endif  // LSVCLUSTER_LSVCLUSTER_HPP
