// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include "puchain/ermgm.hpp"
#include "puchain/expfam.hpp"
#include "puchain/json_io.hpp"
#include "puchain/matrix.hpp"
#include "puchain/models.hpp"
#include "puchain/netstat.hpp"
#include "puchain/oracle.hpp"
#include "puchain/permutation.hpp"
#include "puchain/puniform.hpp"
#include "puchain/random.hpp"
#include "puchain/simulate.hpp"
#include "puchain/state_space.hpp"
