#pragma once

#include "qcluster/error.hpp"
#include "qcluster/laurent.hpp"
#include "qcluster/qcombinatorics.hpp"
#include "qcluster/torus.hpp"
#include "qcluster/dyck.hpp"
#include "qcluster/families.hpp"
#include "qcluster/cluster.hpp"
#include "qcluster/strata.hpp"
#include "qcluster/ffield.hpp"
#include "qcluster/io.hpp"
#include "qcluster/verify.hpp"
