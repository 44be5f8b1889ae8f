pub mod curves;
pub mod spiral;
