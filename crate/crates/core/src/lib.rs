// Copyright 2026 The lightcone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Light-cone estimators for local observables on clustered quantum circuits.

pub mod algebraic;
pub mod allocation;
pub mod benchmarks;
pub mod causal;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod format;
pub mod lightcone;
pub mod linalg;
pub mod report;
pub mod resources;
pub mod sampling;
pub mod statevector;
