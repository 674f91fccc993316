"""File repositories: edge lists, CSV matrices, trees and reports."""
