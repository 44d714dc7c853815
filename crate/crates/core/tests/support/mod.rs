pub mod hdbscan_oracle;
pub mod retrieval_oracle;
