#![allow(dead_code)]

pub mod linalg_oracle;
