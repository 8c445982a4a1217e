#![allow(dead_code)]

pub mod magnus;
