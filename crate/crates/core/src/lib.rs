//! Flux-quantizing superconducting data conversion: material models, slab
//! electrodynamics, the flux-trap amplifier, junction transport, resistance
//! noise, the SQUID comparator/DAC and a second-order delta-sigma modulator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparator;
pub mod constants;
pub mod dsm;
pub mod electrodynamics;
pub mod export;
pub mod fluxtrap;
pub mod junctions;
pub mod materials;
pub mod noise;
pub mod quad;
