#ifndef OBSIM_VERSION_HPP
#define OBSIM_VERSION_HPP

#define OBSIM_VERSION "0.1.0"

#endif
