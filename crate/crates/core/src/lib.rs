// SPDX-License-Identifier: Apache-2.0

pub mod circuit;
pub mod equivalence;
pub mod error;
pub mod exact;
pub mod format;
pub mod optimizer;
pub mod qcost;
pub mod sequential;
pub mod synthesis;
